"""Brute-force oracle for the built-in curve constants frozen into the C++ tests."""
import sys
from sympy import isprime, factorint


def points(q, a, b):
    pts = [None]
    for x in range(q):
        rhs = (x * x * x + a * x + b) % q
        for y in range(q):
            if (y * y) % q == rhs:
                pts.append((x, y))
    return pts


def add(p, r, q, a):
    if p is None:
        return r
    if r is None:
        return p
    if p[0] == r[0] and (p[1] + r[1]) % q == 0:
        return None
    if p == r:
        lam = (3 * p[0] * p[0] + a) * pow(2 * p[1], -1, q) % q
    else:
        lam = (r[1] - p[1]) * pow(r[0] - p[0], -1, q) % q
    x = (lam * lam - p[0] - r[0]) % q
    return (x, (lam * (p[0] - x) - p[1]) % q)


def order(p, q, a):
    k, acc = 1, p
    while acc is not None:
        acc = add(acc, p, q, a)
        k += 1
    return k


def tiny():
    q, a, b = 23, 1, 1
    pts = points(q, a, b)
    print("tiny23 order", len(pts))
    print("tiny23 first points", pts[:6])
    best = None
    for p in sorted(pts[1:]):
        o = order(p, q, a)
        if best is None or o > best[1]:
            best = (p, o)
    print("tiny23 generator", best)
    print("(0,1)+(0,1) =", add((0, 1), (0, 1), q, a))
    print("inv 5 mod 23 =", [z for z in range(1, 23) if 5 * z % 23 == 1])
    # Koblitz on tiny23, kappa=4
    for m in range(23 // 4):
        for j in range(4):
            x = m * 4 + j
            rhs = (x ** 3 + x + 1) % q
            ys = [y for y in range(q) if y * y % q == rhs]
            if ys:
                print("encode", m, "->", (x, min(ys)))
                break
        else:
            print("encode", m, "FAILS")


def desk_search(start):
    # smallest prime q >= start, a=... such that the group order is prime
    q = start
    while True:
        if isprime(q):
            for a in range(1, 8):
                for b in range(1, 8):
                    if (4 * a ** 3 + 27 * b ** 2) % q == 0:
                        continue
                    # count via Legendre symbol
                    n = 1
                    for x in range(q):
                        r = (x * x * x + a * x + b) % q
                        if r == 0:
                            n += 1
                        elif pow(r, (q - 1) // 2, q) == 1:
                            n += 2
                    if isprime(n):
                        return q, a, b, n
        q += 1


if __name__ == "__main__":
    tiny()
    if len(sys.argv) > 1:
        q, a, b, n = desk_search(int(sys.argv[1]))
        print("desk", q, a, b, n)
        # generator: smallest (x,y) point; all non-identity points have order n
        for x in range(q):
            r = (x ** 3 + a * x + b) % q
            if r == 0:
                print("G", (x, 0)); break
            if pow(r, (q - 1) // 2, q) == 1:
                ys = [y for y in range(q) if y * y % q == r]
                print("G", (x, min(ys))); break
