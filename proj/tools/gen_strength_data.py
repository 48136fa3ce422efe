#!/usr/bin/env python3
"""Exports the zxcvbn frequency lists and keyboard graphs (MIT licensed) into
data/strength/ and src/strength/adjacency_graphs.inc.

    pip install zxcvbn && python3 tools/gen_strength_data.py
"""
import sys
from pathlib import Path

from zxcvbn.adjacency_graphs import ADJACENCY_GRAPHS
from zxcvbn.frequency_lists import FREQUENCY_LISTS

ORDER = ["passwords", "english_wikipedia", "female_names", "surnames", "us_tv_and_film",
         "male_names"]


def cpp_string(s):
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def main():
    root = Path(sys.argv[1] if len(sys.argv) > 1 else ".")
    data = root / "data" / "strength"
    data.mkdir(parents=True, exist_ok=True)
    for name in ORDER:
        (data / f"{name}.txt").write_text("\n".join(FREQUENCY_LISTS[name]) + "\n")

    lines = ["// Generated by tools/gen_strength_data.py from zxcvbn (MIT). Do not edit.", ""]
    for graph in ["qwerty", "dvorak", "keypad", "mac_keypad"]:
        lines.append(f"inline const AdjacencyGraph k_{graph}_graph = {{")
        for key in sorted(ADJACENCY_GRAPHS[graph]):
            neighbors = ADJACENCY_GRAPHS[graph][key]
            cells = ", ".join(cpp_string(n) if n else '""' for n in neighbors)
            lines.append(f"    {{{cpp_string(key)}, {{{cells}}}}},")
        lines.append("};")
        lines.append("")
    (root / "src" / "strength" / "adjacency_graphs.inc").write_text("\n".join(lines))


if __name__ == "__main__":
    main()
