"""Command-line surface: resource tables, exact diagonalization, VQE runs,
downfolding, amplitude generation, and potential-energy-surface sweeps.

Exit codes: 0 success, 2 usage errors, 3 data errors (missing/malformed
files, inconsistent sectors), 4 non-convergence.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import ansatz as ansatz_mod
from . import ducc as ducc_mod
from . import integrals as integrals_mod
from . import simulator, vqe
from .amplitudes import (ClusterAmplitudes, ConvergenceError,
                         DegenerateReferenceError, ccsd_solve,
                         load_amplitudes, mp2_amplitudes, mp2_energy,
                         save_amplitudes, top_amplitudes)
from .fermion import (ActiveSpace, SectorError, SpaceError, build_hamiltonian,
                      exact_ground_state, hf_energy)
from .mapping import jordan_wigner

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_CONVERGENCE = 4

MP2_SCREEN_DEFAULT = 1e-5

DATA_ERRORS = (OSError, ValueError, integrals_mod.IntegralError, SpaceError,
               SectorError, DegenerateReferenceError, simulator.SimulatorError,
               ansatz_mod.AnsatzError, vqe.VqeError)


class _CliDataError(Exception):
    pass


def _load_spin(args):
    """Resolve --fixture/--integrals into (SpinIntegralSet, nelec, ms2)."""
    if args.fixture:
        spin = integrals_mod.builtin_fixture(args.fixture).to_spin_orbital()
        path = integrals_mod.fixture_path(args.fixture)
    else:
        path = args.integrals
        if integrals_mod.is_spin_resolved(path):
            spin = integrals_mod.load_spin_fcidump(path)
        else:
            spin = integrals_mod.load_fcidump(path).to_spin_orbital()
    header, _ = integrals_mod._read_lines(path)
    nelec = args.nelec if args.nelec is not None \
        else int(header.get("NELEC", 0))
    ms2 = args.ms2 if args.ms2 is not None else int(header.get("MS2", 0))
    if nelec < 1 or nelec > spin.n_spin_orbitals:
        raise _CliDataError(f"bad electron count {nelec} for "
                            f"{spin.n_spin_orbitals} spin orbitals")
    return spin, nelec, ms2


def _reference_det(nelec):
    return (1 << nelec) - 1


def _emit(args, text):
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def cmd_resources(args):
    o, v = args.electrons // 2, args.orbitals - args.electrons // 2
    if args.electrons % 2:
        raise _CliDataError("closed-shell resources need an even --electrons")
    if v < 0:
        raise _CliDataError("--electrons exceeds capacity of --orbitals")
    space = ActiveSpace.build(args.orbitals, tuple(range(1, o + 1)))
    exc = ansatz_mod.enumerate_excitations(space, args.electrons)
    report = ansatz_mod.resource_report(exc, space)
    row = {
        "orbitals": args.orbitals,
        "n_qubits": report.n_qubits,
        "excitations": report.n_excitations,
        "parameters": report.n_parameters,
        "gates": report.gate_count,
        "depth": report.depth,
    }
    if args.integrals:
        spin = integrals_mod.load_fcidump(args.integrals).to_spin_orbital()
        t_mp2 = mp2_amplitudes(spin, _reference_det(args.electrons))
        screened = ansatz_mod.screen_excitations(exc, t_mp2,
                                                 args.mp2_threshold)
        srep = ansatz_mod.resource_report(screened, space)
        row.update(screened_excitations=srep.n_excitations,
                   screened_gates=srep.gate_count,
                   screened_depth=srep.depth)
    if args.format == "csv":
        _emit(args, ",".join(row) + "\n" + ",".join(str(x)
                                                    for x in row.values()))
    else:
        width = max(len(k) for k in row)
        _emit(args, "\n".join(f"{k:<{width}}  {v}" for k, v in row.items()))
    return EXIT_OK


def cmd_eig(args):
    spin, nelec, ms2 = _load_spin(args)
    h = build_hamiltonian(spin)
    energy, _ = exact_ground_state(h, nelec, ms2)
    _emit(args, json.dumps({"energy": energy, "nelec": nelec, "ms2": ms2}))
    return EXIT_OK


def cmd_mp2(args):
    spin, nelec, _ = _load_spin(args)
    ref = _reference_det(nelec)
    t = mp2_amplitudes(spin, ref)
    if args.amplitudes_out:
        save_amplitudes(t, args.amplitudes_out)
    e_hf = hf_energy(spin, ref)
    e_corr = mp2_energy(spin, ref, t)
    _emit(args, json.dumps({
        "e_hf": e_hf, "e_corr": e_corr, "e_total": e_hf + e_corr,
        "top_amplitudes": top_amplitudes(t, args.top)}))
    return EXIT_OK


def cmd_ccsd(args):
    spin, nelec, _ = _load_spin(args)
    ref = _reference_det(nelec)
    t, e_corr = ccsd_solve(spin, ref)
    if args.amplitudes_out:
        save_amplitudes(t, args.amplitudes_out)
    e_hf = hf_energy(spin, ref)
    _emit(args, json.dumps({
        "e_hf": e_hf, "e_corr": e_corr, "e_total": e_hf + e_corr,
        "top_amplitudes": top_amplitudes(t, args.top)}))
    return EXIT_OK


def _parse_active(spec, n_orbitals, nelec):
    orbitals = sorted({int(tok) for tok in spec.replace(",", " ").split()})
    occupied = tuple(range(1, nelec // 2 + 1))
    missing = [p for p in occupied if p not in orbitals]
    if missing:
        raise _CliDataError(f"--active must include occupied orbitals "
                            f"{missing}")
    virtuals = tuple(p for p in orbitals if p not in occupied)
    return ActiveSpace.build(n_orbitals, occupied, virtuals)


def cmd_downfold(args):
    spin, nelec, _ = _load_spin(args)
    if nelec % 2:
        raise _CliDataError("downfolding assumes a closed-shell reference")
    space = _parse_active(args.active, spin.n_spin_orbitals // 2, nelec)
    ref = _reference_det(nelec)
    if args.amplitudes:
        m = spin.n_spin_orbitals
        occ = [p for p in range(m) if (ref >> p) & 1]
        virt = [p for p in range(m) if not (ref >> p) & 1]
        t = load_amplitudes(args.amplitudes, occ, virt)
    else:
        t, _ = ccsd_solve(spin, ref)
    dh = ducc_mod.downfold(spin, space, t)
    dh.save(args.out)
    print(json.dumps({"out": args.out, "n_active_spin": dh.n_active_spin,
                      "scalar": dh.scalar}))
    return EXIT_OK


def _vqe_run(spin, nelec, seed, warm, screen_threshold=None,
             max_evaluations=None):
    n_orbitals = spin.n_spin_orbitals // 2
    space = ActiveSpace.build(n_orbitals, tuple(range(1, nelec // 2 + 1)))
    exc = ansatz_mod.enumerate_excitations(space, nelec)
    ref = _reference_det(nelec)
    if warm == "mp2" or screen_threshold is not None:
        t_mp2 = mp2_amplitudes(spin, ref)
    if screen_threshold is not None:
        exc = ansatz_mod.screen_excitations(exc, t_mp2, screen_threshold)
    circ = ansatz_mod.trotter_circuit(exc)
    x0 = vqe.warm_start(t_mp2, exc) if warm == "mp2" \
        else np.zeros(len(exc))
    hp = jordan_wigner(build_hamiltonian(spin)).real()
    problem = vqe.VqeProblem(hp, circ, tuple(range(nelec)), x0, seed=seed)
    if max_evaluations is not None:
        problem.max_evaluations = max_evaluations
    return vqe.minimize(problem)


def cmd_vqe(args):
    spin, nelec, _ = _load_spin(args)
    if nelec % 2:
        raise _CliDataError("the UCCSD reference here is closed-shell")
    result = _vqe_run(spin, nelec, args.seed, args.warm_start,
                      args.screen_threshold, args.max_evaluations)
    _emit(args, result.to_json())
    return EXIT_OK if result.converged else EXIT_CONVERGENCE


def _read_manifest(path):
    rows = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise _CliDataError(
                    f"{path}:{lineno}: expected 'label fixture-or-file'")
            rows.append(tuple(parts))
    if not rows:
        raise _CliDataError(f"{path}: empty manifest")
    return rows


def _pes_point(source, methods, nelec_flag, ms2_flag, seed):
    ns = argparse.Namespace(
        fixture=source if source in integrals_mod.FIXTURE_NAMES else None,
        integrals=None if source in integrals_mod.FIXTURE_NAMES else source,
        nelec=nelec_flag, ms2=ms2_flag)
    spin, nelec, ms2 = _load_spin(ns)
    out = {}
    if "eig" in methods:
        out["eig"], _ = exact_ground_state(build_hamiltonian(spin),
                                           nelec, ms2)
    if "vqe" in methods:
        out["vqe"] = _vqe_run(spin, nelec, seed, "mp2").energy
    return out


def cmd_pes(args):
    rows = _read_manifest(args.manifest)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    if not methods or any(m not in ("eig", "vqe") for m in methods):
        raise _CliDataError(f"--methods must name eig and/or vqe, "
                            f"got {args.methods!r}")
    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        futures = [pool.submit(_pes_point, src, methods, args.nelec,
                               args.ms2, args.seed)
                   for _, src in rows]
        energies = [f.result() for f in futures]
    header = ["label"] + [f"E_{m}" for m in methods]
    if args.reference in methods:
        header += [f"err_{m}" for m in methods]
    lines = [",".join(header)]
    for (label, _), e in zip(rows, energies):
        cells = [label] + [f"{e[m]:.10f}" for m in methods]
        if args.reference in methods:
            cells += [f"{e[m] - e[args.reference]:.10f}" for m in methods]
        lines.append(",".join(cells))
    _emit(args, "\n".join(lines))
    first = methods[0]
    curve = [e[first] for e in energies]
    e_d = curve[-1] - min(curve)
    print(json.dumps({"method": first, "E_D": e_d,
                      "minimum": min(curve)}), file=sys.stderr)
    return EXIT_OK


def _add_input_flags(p, require=True):
    group = p.add_mutually_exclusive_group(required=require)
    group.add_argument("--fixture", choices=integrals_mod.FIXTURE_NAMES)
    group.add_argument("--integrals", metavar="FILE")
    p.add_argument("--nelec", type=int, default=None)
    p.add_argument("--ms2", type=int, default=None)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ducc-vqe",
        description="Downfolded-Hamiltonian construction and simulated VQE")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("resources", help="UCCSD qubit/gate/depth accounting")
    p.add_argument("--orbitals", type=int, required=True)
    p.add_argument("--electrons", type=int, required=True)
    p.add_argument("--mp2-threshold", type=float, default=MP2_SCREEN_DEFAULT)
    p.add_argument("--integrals", metavar="FILE")
    p.add_argument("--format", choices=("table", "csv"), default="table")
    p.add_argument("--out")
    p.set_defaults(func=cmd_resources)

    p = sub.add_parser("eig", help="exact sector ground-state energy")
    _add_input_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_eig)

    for name, func in (("mp2", cmd_mp2), ("ccsd", cmd_ccsd)):
        p = sub.add_parser(name, help=f"{name.upper()} amplitudes + energies")
        _add_input_flags(p)
        p.add_argument("--amplitudes-out", metavar="FILE")
        p.add_argument("--top", type=int, default=5)
        p.add_argument("--out")
        p.set_defaults(func=func)

    p = sub.add_parser("vqe", help="simulated VQE on the UCCSD ansatz")
    _add_input_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--warm-start", choices=("mp2", "zero"), default="mp2")
    p.add_argument("--screen-threshold", type=float, default=None)
    p.add_argument("--max-evaluations", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_vqe)

    p = sub.add_parser("downfold", help="active-space effective Hamiltonian")
    _add_input_flags(p)
    p.add_argument("--active", required=True,
                   help="active spatial orbitals, e.g. '1,2'")
    p.add_argument("--amplitudes", metavar="FILE",
                   help="cluster amplitudes (default: solve CCSD)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_downfold)

    p = sub.add_parser("pes", help="potential-energy-surface sweep")
    p.add_argument("--manifest", required=True,
                   help="file of 'label fixture-or-file' lines")
    p.add_argument("--methods", default="eig")
    p.add_argument("--reference", default=None)
    p.add_argument("--nelec", type=int, default=None)
    p.add_argument("--ms2", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_pes)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (_CliDataError, *DATA_ERRORS) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
