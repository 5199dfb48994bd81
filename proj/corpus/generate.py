#!/usr/bin/env python3
"""Regenerates the table files under corpus/. Run from the repo root."""

from pathlib import Path

ROOT = Path(__file__).resolve().parent


def table(n, f):
    return "\n".join(" ".join(str(f(a, b)) for b in range(n)) for a in range(n))


def ring(n):
    return (f"algebra z{n}\ncarrier {n}\n"
            f"op add/2\n{table(n, lambda a, b: (a + b) % n)}\n"
            f"op mul/2\n{table(n, lambda a, b: (a * b) % n)}\n"
            f"op zero/0 = 0\nop one/0 = {1 % n}\n")


def group(n):
    return (f"algebra z{n}\ncarrier {n}\n"
            f"op add/2\n{table(n, lambda a, b: (a + b) % n)}\n"
            f"op zero/0 = 0\n")


def chain_lattice(n):
    return (f"algebra chain{n}\ncarrier {n}\n"
            f"op meet/2\n{table(n, min)}\n"
            f"op join/2\n{table(n, max)}\n"
            f"op bot/0 = 0\nop top/0 = {n - 1}\n")


def main():
    for n in (2, 3, 4, 5, 6, 12):
        (ROOT / "rings" / f"z{n}.alg").write_text(ring(n))
    (ROOT / "trivial" / "trivial.alg").write_text(ring(1).replace("z1", "trivial"))
    (ROOT / "groups" / "z2.alg").write_text(group(2))
    (ROOT / "groups" / "z3.alg").write_text(group(3))
    (ROOT / "lattices" / "chain2.alg").write_text(chain_lattice(2))
    (ROOT / "semilattices" / "sl2.alg").write_text(
        f"algebra sl2\ncarrier 2\nop meet/2\n{table(2, min)}\n")
    (ROOT / "pointed" / "pointed2.alg").write_text("algebra pointed2\ncarrier 2\nop pt/0 = 0\n")


if __name__ == "__main__":
    main()
