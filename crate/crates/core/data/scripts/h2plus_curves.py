"""H2+ 1s-sigma-g / 2p-sigma-u energies and transition dipole.

Variational solution in prolate spheroidal coordinates with a
Laguerre x Legendre product basis. Prints R, V_g, V_u (electronic
energy plus 1/R) and |mu_ug| in atomic units.
"""
import numpy as np
from numpy.polynomial.laguerre import laggauss
from numpy.polynomial.legendre import leggauss
from scipy.special import eval_genlaguerre, eval_legendre
from scipy.linalg import eigh

def solve(R, N=24, M=40, nq=120):
    # basis: exp(-a(xi-1)) L_j(2a(xi-1)) P_k(eta)
    E_guess = -0.5 - 1.0/R if R>1 else -1.5
    a = R*np.sqrt(-2*E_guess)/2
    x, wx = laggauss(nq)   # int_0^inf e^{-x} f
    s = x/(2*a); xi = 1+s           # e^{-2a s} weight -> with x=2a s
    wxi = wx/(2*a)                  # includes e^{-2a(xi-1)} as weight
    eta, we = leggauss(M+20)
    out = {}
    for parity in (0,1):
        ks = [k for k in range(M) if k%2==parity]
        js = list(range(N))
        nb = len(js)*len(ks)
        # radial functions f_j(xi) = L_j(2a s) (exp factor in weight, half each)
        L = np.array([eval_genlaguerre(j,0,2*a*s) for j in js])        # (N,nq)
        # derivative of exp(-a s) L_j(2a s) wrt xi: exp(-a s)[ -a L_j + 2a L_j'(2as)]
        dL = np.array([(-a*eval_genlaguerre(j,0,2*a*s) - (2*a*eval_genlaguerre(j-1,1,2*a*s) if j>0 else 0)) for j in js])
        P = np.array([eval_legendre(k,eta) for k in ks])
        # dP/deta
        dP = []
        for k in ks:
            c = np.zeros(k+1); c[k]=1
            dP.append(np.polynomial.legendre.legval(eta, np.polynomial.legendre.legder(c)))
        dP = np.array(dP)
        # integrals factorize as sums of products of 1D integrals
        def rint(f, g, w):  # int f g w dxi over radial
            return (f*w) @ g.T
        def aint(f, g, w):
            return (f*w) @ g.T
        X0 = rint(L, L, wxi); X2 = rint(L, L, wxi*xi**2); X1 = rint(L,L,wxi*xi)
        Xd = rint(dL, dL, wxi*(xi**2-1))
        H0 = aint(P,P,we); H2 = aint(P,P,we*eta**2); Hd = aint(dP,dP,we*(1-eta**2))
        S = (R/2)**3*(np.kron(X2,H0) - np.kron(X0,H2))
        T = 0.5*(R/2)*(np.kron(Xd,H0) + np.kron(X0,Hd))
        V = -(R**2/2)*np.kron(X1,H0)
        H = T+V
        # orthogonalize S
        w, U = eigh(S)
        keep = w > 1e-12*w.max()
        Bm = U[:,keep]/np.sqrt(w[keep])
        e, c = eigh(Bm.T@H@Bm)
        C = Bm@c[:,0]
        out[parity] = (e[0], C, L, P, xi, wxi, eta, we)
    # dipole z = (R/2) xi eta
    eg, Cg, Lg, Pg, xi, wxi, eta, we = out[0]
    eu, Cu, Lu, Pu, *_ = out[1]
    Ng = len(Pg); Nu=len(Pu)
    Xz = (Lg*wxi*xi*(xi**2)) @ Lu.T; Xz0 = (Lg*wxi*xi) @ Lu.T
    Hz2 = (Pg*we*eta) @ Pu.T; Hz3 = (Pg*we*eta**3) @ Pu.T
    Z = (R/2)**4*(np.kron(Xz,Hz2) - np.kron(Xz0,Hz3))
    mu = Cg@Z@Cu
    # normalize (eigh gives normalized in S)
    return eg, eu, abs(mu)



if __name__ == "__main__":
    Rs = (list(np.round(np.arange(0.1, 4.0, 0.05), 4))
          + list(np.round(np.arange(4.0, 10.0, 0.1), 4))
          + list(np.round(np.arange(10.0, 30.01, 0.5), 4)))
    for R in Rs:
        eg, eu, mu = solve(R, 20, 30, nq=150)
        print(f"{R:.4f} {eg + 1 / R:.12f} {eu + 1 / R:.12f} {mu:.10f}", flush=True)
