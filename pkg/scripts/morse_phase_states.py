"""Phase states of the Morse system at its natural truncation s = l + 1.

    python3 scripts/morse_phase_states.py [--l 4] [--t 0.7]

Prints the spectrum and weights, checks that evolution only shifts phi,
and that the quantized-phi Fourier states coincide with the MUB vectors.
"""

import argparse
import sys

import numpy as np

from phasekit import mub, phase, potentials


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--l", type=int, default=4)
    parser.add_argument("--t", type=float, default=0.7)
    parser.add_argument("--phi", type=float, default=0.3)
    args = parser.parse_args(argv)

    spec = potentials.Morse(args.l)
    params = potentials.to_spectrum_params(spec)
    s = potentials.truncation_order(params)
    rep = potentials.report(spec)
    print(f"Morse l={args.l}: a={params.a} b={params.b} kappa={params.kappa} s={s}")
    print("e_n :", ", ".join(str(e) for e in potentials.energies(params, s)))
    print("E(n):", ", ".join(f"{w:g}" for w in rep["weights"]))
    print(f"Gamma closed form, max relative error {rep['gamma_check']['max_rel_err']:.2e}")

    now = potentials.physical_phase_states(spec, s, args.phi)
    later = potentials.physical_phase_states(spec, s, args.phi + args.t)
    drift = max(float(np.abs(phase.evolve(a, args.t).amplitudes - b.amplitudes).max())
                for a, b in zip(now.fourier + now.weighted, later.fourier + later.weighted))
    print(f"evolve(t={args.t}) vs rebuild at phi+t: {drift:.2e}")

    worst = 0.0
    for p in range(s):
        fam = potentials.physical_phase_states(spec, s, potentials.quantized_physical_phi(spec, s, p))
        for m, st in enumerate(fam.fourier):
            ref = mub.mub_state_truncated(params.kappa, s, p, m).amplitudes
            worst = max(worst, abs(abs(np.vdot(st.amplitudes, ref)) - 1))
    print(f"quantized-phi states vs MUB vectors (1 - |overlap|): {worst:.2e}")

    mset = mub.build_mub_set(s, "truncated", params.kappa)
    print(f"truncated-route set: {len(mset)} bases, complete={mset.complete}, "
          f"max deviation {mset.max_deviation():.2e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
