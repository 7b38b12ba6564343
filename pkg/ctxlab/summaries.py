"""
Human-readable report summaries
Rendered to stderr under --verbose; reports themselves stay JSON on stdout
"""
import logging
from typing import Any, Dict, List

logger = logging.getLogger(__name__)


class ReportSummarizer:
    """Turns a report dict into a few lines of text"""

    def __init__(self) -> None:
        self.flag_labels = {
            "deterministic": "deterministic",
            "vertex": "polytope vertex",
            "contextual": "contextual",
            "strongly_contextual": "strongly contextual",
        }

    def summarize(self, report: Dict[str, Any]) -> str:
        """
        Summarize one report

        Args:
            report: Report produced by any ctxlab command

        Returns:
            Multi-line summary, one fact per line
        """
        lines = [f"📄 {report.get('command', '?')} {report.get('input', '')}".rstrip()]
        if "classification" in report:
            lines.extend(self._classification_lines(report["classification"]))
        if "category" in report:
            lines.extend(self._category_lines(report["category"]))
        if "face" in report:
            lines.extend(self._face_lines(report["face"]))
        if "collapse" in report:
            lines.append(f"🔗 collapsed {report['collapse'].get('edge')}: flags preserved")
        if "output" in report:
            lines.append(f"💾 wrote {report['output']}")
        lines.append(f"⏱️ {report.get('timing_ms', 0):.1f} ms, digest {report.get('input_digest', '-')}")
        return "\n".join(lines)

    def _classification_lines(self, classification: Dict[str, Any]) -> List[str]:
        lines = []
        for key, label in self.flag_labels.items():
            value = classification.get(key)
            if value is None:
                lines.append(f"➖ {label}: n/a")
            else:
                lines.append(f"{'✅' if value else '❌'} {label}")
        pr = classification.get("witnesses", {}).get("deciders", {}).get("pr_circle", {})
        if pr.get("circle"):
            lines.append(f"🔁 PR circle {' '.join(pr['circle'])}")
        return lines

    def _category_lines(self, category: Dict[str, Any]) -> List[str]:
        homs = category.get("hom_sets", {})
        lines = [f"📚 {pair}: {{{', '.join(names)}}}" for pair, names in homs.items()]
        support = category.get("support", [])
        lines.append(f"🎯 support size {len(support)}")
        return lines

    def _face_lines(self, face: Dict[str, Any]) -> List[str]:
        lines = [f"🧭 face dimension {face.get('dimension')}, H = {face.get('subgroup')}"]
        if face.get("unique_sc_vertex") is not None:
            lines.append("⭐ unique strongly contextual vertex")
        return lines


summarizer = ReportSummarizer()
