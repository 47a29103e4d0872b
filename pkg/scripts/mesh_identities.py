"""Print the symbolic identity checks for a list of Dynkin trees."""

import sys

from arknit.mesh import check_identities, dynkin_tree


def main(names):
    failed = False
    for name in names or ["A2", "A5", "D3", "D4", "D6", "E6", "E7", "E8"]:
        report = check_identities(dynkin_tree(name))
        for note in report.notes:
            print(f"{name}: note: {note}")
        for res in report.results:
            kind = "cited" if res.identity.cited else "extra"
            print(f"{name}: {'PASS' if res.holds else 'FAIL'} [{kind}] {res.text} (computed {res.computed})")
            failed |= res.identity.cited and not res.holds
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
