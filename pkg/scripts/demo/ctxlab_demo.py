#!/usr/bin/env python3
"""
ctxlab walkthrough
Classifies the standard examples and prints what each decider reports
"""

from fractions import Fraction
from pathlib import Path
from typing import Any, Dict

from ctxlab.contextuality import classify, homotopical_witness, pr_circle_decider
from ctxlab.homotopy import count_non_null_homotopic, face_structure, unique_sc_vertex
from ctxlab.io import load_distribution
from ctxlab.logiccat import build_category, reduce_and_decide
from ctxlab.scenario import Circle, Step, cycle_scenario, theta_scenario
from ctxlab.simpdist import deterministic, mixture, pr_box

DATA = Path(__file__).resolve().parents[2] / "data"


class CtxlabDemo:
    """Runs the standard examples end to end"""

    def __init__(self, data_dir: Path = DATA):
        self.data_dir = data_dir

    def flags(self, name: str) -> Dict[str, Any]:
        return classify(load_distribution(self.data_dir / name)).flags()

    def pr_family(self, max_n: int = 6) -> Dict[int, bool]:
        """PR boxes on N-cycles with one p₋ edge"""
        out = {}
        for n in range(1, max_n + 1):
            s = cycle_scenario(n)
            p = pr_box(s, Circle.canonical(Step(e.id) for e in s.edges), ["e0"])
            out[n] = classify(p).strongly_contextual
        return out

    def run_demo(self) -> None:
        print("🚀 ctxlab - exact contextuality analysis")
        print("=" * 60)

        print("\n1. 📄 Bundled distributions")
        for name in ("chsh_pr.json", "square_mixture.json", "abcdu.json"):
            flags = self.flags(name)
            marks = " ".join(f"{'✅' if v else '❌' if v is False else '➖'} {k}" for k, v in flags.items())
            print(f"   {name}: {marks}")

        print("\n2. 🔁 PR boxes on N-cycles")
        for n, sc in self.pr_family().items():
            print(f"   N={n}: {'✅ strongly contextual' if sc else '❌'}")

        print("\n3. 🧭 Homotopy on the theta scenario")
        s = theta_scenario(3)
        for d in (2, 3):
            print(f"   d={d}: {count_non_null_homotopic(s, d)} non-null-homotopic edge labelings")
        labels = {"e0": 1, "e1": 0, "e2": 0}
        fs = face_structure(s, labels, 2)
        vertex = unique_sc_vertex(s, labels, 2)
        print(f"   face of {labels}: dimension {fs.dimension}, SC vertex: {classify(vertex).strongly_contextual}")

        print("\n4. 📚 Logical category of the CHSH box")
        chsh = load_distribution(self.data_dir / "chsh_pr.json")
        decision = reduce_and_decide(chsh)
        for step in decision.trace:
            print(f"   - {step}")
        pr = pr_circle_decider(chsh)
        print(f"   circle {pr.circle.describe()} labels {homotopical_witness(chsh, pr.circle)}")
        print(f"   hom(v0, v0) = {build_category(chsh).as_dict()['v0,v0']}")

        print("\n5. ⚖️ Mixing a PR box with a deterministic distribution")
        square = cycle_scenario(4)
        det = deterministic(square, {v: 0 for v in square.vertices}, 2)
        for w in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
            p = mixture([(w, chsh), (1 - w, det)])
            flags = classify(p).flags()
            print(f"   {w} PR: contextual={flags['contextual']} strongly_contextual={flags['strongly_contextual']}")

        print("\n🎉 Done")


if __name__ == "__main__":
    CtxlabDemo().run_demo()
