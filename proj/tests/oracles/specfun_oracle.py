#!/usr/bin/env python3
"""Generates the frozen digamma/trigamma reference table used by the tests.

50 log-spaced points across [1e-3, 1e6], values from mpmath at 50 digits.
Output is a C++ table; paste into tests (kept frozen so the suite never
depends on Python at build time).
"""
import mpmath as mp

mp.mp.dps = 50

N = 50


def points():
    for i in range(N):
        yield mp.mpf(10) ** (-3 + 9 * mp.mpf(i) / (N - 1))


def main():
    print("// Generated by tests/oracles/specfun_oracle.py (mpmath, 50 digits).")
    print("struct SpecFunRef { double x; double digamma; double trigamma; };")
    print("constexpr SpecFunRef kSpecFunTable[] = {")
    for x in points():
        d = mp.digamma(x)
        t = mp.polygamma(1, x)
        print(f"    {{{mp.nstr(x, 17)}, {mp.nstr(d, 17)}, {mp.nstr(t, 17)}}},")
    print("};")


if __name__ == "__main__":
    main()
