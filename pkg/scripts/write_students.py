"""Write the teacher/N-students scenario to a file or stdout."""

import argparse
import sys

from delwca.generate import students_text


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("n", type=int, help="number of students")
    ap.add_argument("-o", "--output")
    args = ap.parse_args()
    text = students_text(args.n)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    main()
