"""Frozen reference values for the radial profiles and trapped-energy checks.

Generated by tests/oracles/freeze_radial_oracle.py (brute-force RK4 at
dr = 1e-5, r <= 20, bisection on u(0) to 1e-12, Simpson quadrature with a
Bessel-K0 tail).  Regenerate with that script; do not edit by hand.
"""

ORACLE = {
    2.0: dict(u0=2.2062008646510707, norm2_sq=11.70089652457195,
              grad_sq=11.700896523109842, pot_q2=23.40179304910293,
              a_q_star=11.70089652457195, mom2=13.89486163658499),
    2.05: dict(u0=2.198960191655108, norm2_sq=11.561330446279241,
               grad_sq=11.561330444855491, pot_q2=23.411694153706065,
               a_q_star=12.29088088328271, mom2=13.827210949236429),
    2.1: dict(u0=2.1918691811837125, norm2_sq=11.42526089297109,
              grad_sq=11.425260891574142, pot_q2=23.421784830601844,
              a_q_star=12.90504229245777, mom2=13.762983973350574),
    2.2: dict(u0=2.1781177283124156, norm2_sq=11.163101515698479,
              grad_sq=11.16310151430598, pot_q2=23.442513182965502,
              a_q_star=14.208995005153598, mom2=13.64419461016074),
    2.5: dict(u0=2.140009226584709, norm2_sq=10.448311164493239,
              grad_sq=10.448311163139934, pot_q2=23.508700120103622,
              a_q_star=18.784845284473022, mom2=13.355548444741483),
    3.0: dict(u0=2.085330169503656, norm2_sq=9.452034026616191,
              grad_sq=9.452034025346112, pot_q2=23.63008506656745,
              a_q_star=29.059485082938664, mom2=13.049558784358984),
}

# H1 distance of each profile to the q=2 one, on the shared radial grid
H1_DIST = {
    2.05: 0.03739809281990637,
    2.1: 0.07416915897706623,
    2.2: 0.14589974352925078,
    2.5: 0.3477320999841608,
    3.0: 0.6459059513113636,
}
H1_NORM_Q = 4.83753997551293

A_STAR = ORACLE[2.0]["norm2_sq"]

# trapped energy of exp(-r^2/2)/sqrt(pi) at q=2.5, a=A_STAR/2, (b1,b2,A)=(1.2,1,1)
GAUSS_ENERGY_Q25 = 0.4714052299931446
GAUSS_POT_TERM = 0.10955710058973066
