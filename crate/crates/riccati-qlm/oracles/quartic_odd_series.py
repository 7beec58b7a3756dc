import mpmath as mp
mp.mp.dps = 400
# chi'' = 2(x^4 - E) chi, odd solution, power series at 0 (entire).
def chi_at(E, X, N=4000):
    a = [mp.mpf(0)]*(N+6)
    a[1] = mp.mpf(1)
    for n in range(0, N):
        prev = a[n-4] if n >= 4 else 0
        a[n+2] = 2*(prev - E*a[n])/((n+2)*(n+1))
    s = mp.mpf(0); xp = mp.mpf(1)
    for n in range(N+2):
        s += a[n]*xp; xp *= X
    return s
for X in [6, 7]:
    E = mp.findroot(lambda E: chi_at(E, mp.mpf(X)), mp.mpf('2.3936440164823'))
    print(X, mp.nstr(E, 30))
