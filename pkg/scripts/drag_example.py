"""Walk the sphere-drag model through the library API."""

from fractions import Fraction

from pi_lattice import BaseDimensionSet, build_model, compute_pi_groups, construct_psi, scalar_model, scaling_law
from pi_lattice.engine import check_covariance, verify_representation


def main():
    mlt = BaseDimensionSet(["M", "L", "T"])
    names = ["F", "rho", "v", "d", "mu"]
    dims = [mlt(v) for v in ([1, 1, -2], [1, -3, 0], [0, 1, -1], [0, 1, 0], [1, -1, -1])]
    model = build_model(names, dims, ["rho", "v", "d"])
    for g in compute_pi_groups(model):
        print(g.render())

    # Stokes-like law plus a quadratic correction
    phi = scalar_model("m_rho * m_v^2 * m_d^2 * (3 + 24 * m_mu / (m_rho * m_v * m_d))", model)
    cov = check_covariance(phi, model, trials=100, seed=0)
    rep = verify_representation(phi, model, trials=100, seed=0)
    print(f"covariance: {'pass' if cov else 'FAIL'}, representation: {'pass' if rep else 'FAIL'}")

    psi = construct_psi(phi, model)
    for nu in (Fraction(0), Fraction(1, 24), Fraction(1)):
        print(f"psi({nu}) = {psi(nu)}")

    law = scaling_law(model, "v")
    print(law.identity_text())


if __name__ == "__main__":
    main()
