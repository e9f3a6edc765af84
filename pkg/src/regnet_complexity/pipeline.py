"""End-to-end orchestration: command-line surface over the analysis modules."""

from __future__ import annotations

import argparse
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

try:  # pragma: no cover - import guard for script execution
    from .attractor import analyze_attractor, detect_stabilization, rotation_number, simulate_orbit
    from .config import EngineMode, NumericMode, RegNetConfig, get_default_config
    from .model import InvalidNetworkError, NetworkSpec, validate, validate_offsets
    from .network_io import LoadedNetwork, load_network, save_frame, save_report
    from .numerics import parse_rational
    from .partition import ComplexityTrace, InjectivityError, complexity_trace, sequence_trace
    from .presets import PresetRegistry, build_preset, random_spec
    from .reporting import (
        atom_dump,
        attractor_to_dict,
        bound_checks_to_dict,
        bound_frame,
        emit_loglog,
        orbit_frame,
        rotation_to_dict,
        structure_to_dict,
        sweep_frame,
        trace_frame,
        trace_summary,
        violations_to_dict,
    )
    from .structure import (
        BoundCheck,
        BoundPolynomial,
        analyze_structure,
        bound_negative_circuit,
        bound_self_inhibitor,
        bound_skew,
        circuit_sign,
        quadratic_envelope,
        skew_base_trace,
        verify_bound,
    )
except ImportError:  # executed as a stand-alone script
    import sys

    PACKAGE_ROOT = Path(__file__).resolve().parent
    if str(PACKAGE_ROOT.parent) not in sys.path:
        sys.path.append(str(PACKAGE_ROOT.parent))

    from regnet_complexity.attractor import analyze_attractor, detect_stabilization, rotation_number, simulate_orbit  # type: ignore
    from regnet_complexity.config import EngineMode, NumericMode, RegNetConfig, get_default_config  # type: ignore
    from regnet_complexity.model import InvalidNetworkError, NetworkSpec, validate, validate_offsets  # type: ignore
    from regnet_complexity.network_io import LoadedNetwork, load_network, save_frame, save_report  # type: ignore
    from regnet_complexity.numerics import parse_rational  # type: ignore
    from regnet_complexity.partition import ComplexityTrace, InjectivityError, complexity_trace, sequence_trace  # type: ignore
    from regnet_complexity.presets import PresetRegistry, build_preset, random_spec  # type: ignore
    from regnet_complexity.reporting import (  # type: ignore
        atom_dump,
        attractor_to_dict,
        bound_checks_to_dict,
        bound_frame,
        emit_loglog,
        orbit_frame,
        rotation_to_dict,
        structure_to_dict,
        sweep_frame,
        trace_frame,
        trace_summary,
        violations_to_dict,
    )
    from regnet_complexity.structure import (  # type: ignore
        BoundCheck,
        BoundPolynomial,
        analyze_structure,
        bound_negative_circuit,
        bound_self_inhibitor,
        bound_skew,
        circuit_sign,
        quadratic_envelope,
        skew_base_trace,
        verify_bound,
    )

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INVARIANT = 3
EXIT_TRUNCATED = 4

COMMANDS = ("validate", "complexity", "structure", "bounds", "attractor", "rotation", "sweep")
RANDOM_PRESET = "random"


@dataclass(slots=True)
class RunConfig:
    """One CLI invocation: the subject network, the analysis and the engine caps."""

    command: str
    preset: Optional[str] = None
    network: Optional[Path] = None
    t_max: int = 50
    engine_mode: EngineMode = "itinerary-exact"
    numeric_mode: NumericMode = "rational"
    epsilon: float = 1e-12
    output_dir: Optional[Path] = None
    seed: int = 42
    max_atoms: int = 1_000_000
    max_seconds: Optional[float] = None
    a: Optional[str] = None
    threshold: Optional[str] = None
    dimension: Optional[int] = None
    signs: Optional[Tuple[int, ...]] = None
    x0: Optional[Tuple[str, ...]] = None
    a_values: Tuple[str, ...] = ()
    threshold_values: Tuple[str, ...] = ()
    density: float = 0.5
    dump_atoms: bool = False

    def problems(self) -> List[str]:
        issues = []
        if self.command not in COMMANDS:
            issues.append(f"Comando desconhecido: {self.command}")
        if self.t_max < 1:
            issues.append(f"--t-max deve ser >= 1 (recebido {self.t_max})")
        if self.max_atoms < 1:
            issues.append(f"--max-atoms deve ser positivo (recebido {self.max_atoms})")
        if self.max_seconds is not None and self.max_seconds <= 0:
            issues.append(f"--max-seconds deve ser positivo (recebido {self.max_seconds})")
        if (self.preset is None) == (self.network is None):
            issues.append("Informe exatamente um entre --preset e --network")
        if self.preset is not None and self.preset != RANDOM_PRESET and self.preset not in PresetRegistry():
            issues.append(f"Preset desconhecido: {self.preset}")
        if self.command == "sweep" and self.preset is None:
            issues.append("sweep exige --preset")
        return issues

    def to_config(self) -> RegNetConfig:
        cfg = get_default_config()
        cfg.seed = self.seed
        cfg.numeric.mode = self.numeric_mode
        cfg.numeric.epsilon = self.epsilon
        cfg.engine.mode = self.engine_mode
        cfg.engine.max_atoms = self.max_atoms
        cfg.engine.max_seconds = self.max_seconds
        if self.output_dir is not None:
            cfg.output_dir = self.output_dir
        return cfg


@dataclass(slots=True)
class RunOutcome:
    """Exit status plus every artifact written."""

    status: int = EXIT_OK
    artifacts: List[Path] = field(default_factory=list)
    messages: List[str] = field(default_factory=list)

    def escalate(self, status: int) -> None:
        # invariant violations outrank truncation
        if status == EXIT_INVARIANT or (status == EXIT_TRUNCATED and self.status == EXIT_OK):
            self.status = status


def _stem(run_config: RunConfig) -> str:
    if run_config.network is not None:
        return Path(run_config.network).stem
    return str(run_config.preset)


def _load_subject(run_config: RunConfig, cfg: RegNetConfig) -> LoadedNetwork:
    if run_config.network is not None:
        return load_network(run_config.network)
    if run_config.preset == RANDOM_PRESET:
        spec = random_spec(run_config.dimension or 3, run_config.density, run_config.seed)
        return LoadedNetwork(spec, None)
    spec = build_preset(
        str(run_config.preset),
        a=run_config.a,
        threshold=run_config.threshold,
        dimension=run_config.dimension,
        signs=run_config.signs,
        config=cfg,
    )
    return LoadedNetwork(spec, None)


def _trace(loaded: LoadedNetwork, run_config: RunConfig, cfg: RegNetConfig) -> ComplexityTrace:
    if loaded.offsets is not None:
        return sequence_trace(loaded.spec, loaded.offsets, run_config.t_max, config=cfg)
    return complexity_trace(loaded.spec, run_config.t_max, config=cfg)


def _trace_status(trace: ComplexityTrace, outcome: RunOutcome) -> None:
    if trace.violations:
        outcome.messages.append(f"{len(trace.violations)} violacao(oes) de invariantes registradas")
        outcome.escalate(EXIT_INVARIANT)
    if trace.truncated:
        outcome.messages.append(f"Execucao truncada em t={trace.t_reached}: {trace.truncation_reason}")
        outcome.escalate(EXIT_TRUNCATED)


def _write_trace(trace: ComplexityTrace, spec: NetworkSpec, stem: str, cfg: RegNetConfig, outcome: RunOutcome, dump_atoms: bool) -> None:
    out = cfg.output_dir
    outcome.artifacts.append(save_frame(trace_frame(trace), out / f"{stem}_trace.csv"))
    outcome.artifacts.append(save_report(trace_summary(trace), out / f"{stem}_trace.json"))
    if dump_atoms:
        outcome.artifacts.append(save_report({"t": trace.t_reached, "atoms": atom_dump(trace.final, spec)}, out / f"{stem}_atoms.json"))


def _primary_bound(spec: NetworkSpec) -> Optional[Tuple[BoundPolynomial, int]]:
    """Named bound for the self-inhibitor and the negative 2-circuit, with its first checked step."""

    if spec.dimension == 1 and spec.arrows == ((0, 0),) and spec.s[0][0] == -1:
        return bound_self_inhibitor(), 1
    if spec.dimension == 2 and circuit_sign(spec) == -1:
        bound = bound_negative_circuit(spec)
        if bound.applicable:
            return bound, 1
        return quadratic_envelope(), 2
    return None


def _collect_bounds(
    loaded: LoadedNetwork,
    trace: ComplexityTrace,
    run_config: RunConfig,
    cfg: RegNetConfig,
) -> List[Tuple[BoundCheck, bool]]:
    spec = loaded.spec
    report = analyze_structure(spec, config=cfg)
    checks: List[Tuple[BoundCheck, bool]] = []
    primary = _primary_bound(spec)
    if primary is not None:
        bound, t_min = primary
        checks.append((verify_bound(trace, bound, t_min=t_min), bound.applicable))
    for bound in report.bounds:
        checks.append((verify_bound(trace, bound), bound.applicable))
    nontrivial = [split for split in report.decompositions if split.bundle]
    if nontrivial and loaded.offsets is None:
        base_trace = skew_base_trace(spec, nontrivial[0], run_config.t_max, config=cfg)
        skew = bound_skew(spec, nontrivial[0], base_trace, partition=trace.partition)
        checks.append((verify_bound(trace, skew), skew.applicable))
    return checks


def _run_validate(loaded: LoadedNetwork, stem: str, cfg: RegNetConfig, outcome: RunOutcome) -> None:
    violations = validate(loaded.spec)
    if loaded.offsets is not None:
        violations = [v for v in violations if v.rule != "normalization"]
        violations.extend(validate_offsets(loaded.spec, loaded.offsets))
    outcome.artifacts.append(save_report(violations_to_dict(violations), cfg.output_dir / f"{stem}_validation.json"))
    for violation in violations:
        outcome.messages.append(f"[{violation.rule}] {violation.message}")
    if violations:
        outcome.status = EXIT_INVALID
    else:
        outcome.messages.append("Rede valida")


def _run_complexity(loaded: LoadedNetwork, run_config: RunConfig, stem: str, cfg: RegNetConfig, outcome: RunOutcome) -> ComplexityTrace:
    trace = _trace(loaded, run_config, cfg)
    _write_trace(trace, loaded.spec, stem, cfg, outcome, run_config.dump_atoms)
    _trace_status(trace, outcome)
    outcome.messages.append(f"C({trace.t_reached}) = {trace.rows[-1].C}")
    return trace


def _run_bounds(loaded: LoadedNetwork, run_config: RunConfig, stem: str, cfg: RegNetConfig, outcome: RunOutcome) -> None:
    trace = _run_complexity(loaded, run_config, stem, cfg, outcome)
    checks = _collect_bounds(loaded, trace, run_config, cfg)
    tables: List[str] = []
    for check, applicable in checks:
        target = cfg.output_dir / f"{stem}_bounds_{check.bound.provenance.replace('-', '_')}.csv"
        outcome.artifacts.append(save_frame(bound_frame(check), target))
        tables.append(target.name)
        state = "ok" if check.ok else f"violado em t={check.first_violation['t']}"
        outcome.messages.append(f"{check.bound.provenance} [{check.bound.formula}]: {state}")
        if not check.ok and applicable:
            outcome.escalate(EXIT_INVARIANT)
    summary = bound_checks_to_dict([(check, table) for (check, _), table in zip(checks, tables)])
    outcome.artifacts.append(save_report(summary, cfg.output_dir / f"{stem}_bounds.json"))
    main_bound = checks[0][0].bound
    loglog = emit_loglog(trace, main_bound)
    outcome.artifacts.append(save_frame(loglog, cfg.output_dir / f"{stem}_loglog.csv"))


def _run_structure(loaded: LoadedNetwork, stem: str, cfg: RegNetConfig, outcome: RunOutcome) -> None:
    report = analyze_structure(loaded.spec, config=cfg)
    outcome.artifacts.append(save_report(structure_to_dict(report), cfg.output_dir / f"{stem}_structure.json"))
    if report.reduction is not None:
        outcome.messages.append(f"Reducao de grau: q={report.reduction.q} ({report.reduction.reason})")
    outcome.messages.append(f"{len(report.decompositions)} decomposicao(oes) base-feixe")


def _initial_point(run_config: RunConfig, spec: NetworkSpec) -> Tuple[Fraction, ...]:
    if run_config.x0 is None:
        return tuple(Fraction(0) for _ in range(spec.dimension))
    if len(run_config.x0) != spec.dimension:
        raise ValueError(f"--x0 tem {len(run_config.x0)} coordenadas, esperado {spec.dimension}")
    return tuple(parse_rational(v) for v in run_config.x0)


def _run_attractor(loaded: LoadedNetwork, run_config: RunConfig, stem: str, cfg: RegNetConfig, outcome: RunOutcome) -> None:
    spec = loaded.spec
    report = analyze_attractor(spec, run_config.t_max, config=cfg)
    outcome.artifacts.append(save_report(attractor_to_dict(report, spec), cfg.output_dir / f"{stem}_attractor.json"))
    orbit = simulate_orbit(spec, _initial_point(run_config, spec), run_config.t_max, config=cfg)
    outcome.artifacts.append(save_frame(orbit_frame(orbit, spec), cfg.output_dir / f"{stem}_orbit.csv"))
    if report.truncated:
        outcome.escalate(EXIT_TRUNCATED)
    if report.tau is None:
        outcome.messages.append("Nenhuma estabilizacao dentro do horizonte")
    else:
        periods = [o.period for o in report.orbits]
        outcome.messages.append(f"Estabilizacao em tau={report.tau}; periodos {periods}")


def _run_rotation(loaded: LoadedNetwork, run_config: RunConfig, stem: str, cfg: RegNetConfig, outcome: RunOutcome) -> None:
    spec = loaded.spec
    x0 = _initial_point(run_config, spec)[0]
    estimate = rotation_number(spec, run_config.t_max, x0=x0, config=cfg)
    outcome.artifacts.append(save_report(rotation_to_dict(estimate), cfg.output_dir / f"{stem}_rotation.json"))
    outcome.messages.append(f"Frequencia {estimate.frequency} (exata: {estimate.exact})")


def _run_sweep(run_config: RunConfig, stem: str, cfg: RegNetConfig, outcome: RunOutcome) -> None:
    a_values = run_config.a_values or ((run_config.a,) if run_config.a is not None else (str(cfg.presets.a),))
    thresholds = run_config.threshold_values or (
        (run_config.threshold,) if run_config.threshold is not None else (str(cfg.presets.threshold),)
    )
    records: List[Dict[str, object]] = []
    for a in a_values:
        for threshold in thresholds:
            spec = build_preset(
                str(run_config.preset),
                a=a,
                threshold=threshold,
                dimension=run_config.dimension,
                signs=run_config.signs,
                config=cfg,
            )
            trace = complexity_trace(spec, run_config.t_max, config=cfg)
            _trace_status(trace, outcome)
            records.append(
                {
                    "a": parse_rational(a),
                    "threshold": parse_rational(threshold),
                    "t_reached": trace.t_reached,
                    "C_final": trace.rows[-1].C,
                    "tau": detect_stabilization(trace),
                    "injective": trace.injective,
                    "truncated": trace.truncated,
                }
            )
    outcome.artifacts.append(save_frame(sweep_frame(records), cfg.output_dir / f"{stem}_sweep.csv"))
    outcome.messages.append(f"{len(records)} celula(s) processadas")


def execute(run_config: RunConfig) -> RunOutcome:
    """Run one command and collect its status and artifacts."""

    outcome = RunOutcome()
    problems = run_config.problems()
    if problems:
        outcome.status = EXIT_INVALID
        outcome.messages.extend(problems)
        return outcome
    cfg = run_config.to_config()
    cfg.ensure_directories()
    stem = _stem(run_config)
    try:
        if run_config.command == "sweep":
            _run_sweep(run_config, stem, cfg, outcome)
            return outcome
        loaded = _load_subject(run_config, cfg)
        if run_config.command == "validate":
            _run_validate(loaded, stem, cfg, outcome)
        elif run_config.command == "complexity":
            _run_complexity(loaded, run_config, stem, cfg, outcome)
        elif run_config.command == "bounds":
            _run_bounds(loaded, run_config, stem, cfg, outcome)
        elif run_config.command == "structure":
            _run_structure(loaded, stem, cfg, outcome)
        elif run_config.command == "attractor":
            _run_attractor(loaded, run_config, stem, cfg, outcome)
        elif run_config.command == "rotation":
            _run_rotation(loaded, run_config, stem, cfg, outcome)
    except InvalidNetworkError as exc:
        outcome.status = EXIT_INVALID
        outcome.messages.extend(f"[{v.rule}] {v.message}" for v in exc.violations)
        save_report(violations_to_dict(exc.violations), cfg.output_dir / f"{stem}_validation.json")
    except (FileNotFoundError, InjectivityError, KeyError, TypeError, ValueError) as exc:
        outcome.status = EXIT_INVALID
        outcome.messages.append(str(exc))
    return outcome


def run(run_config: RunConfig) -> int:
    outcome = execute(run_config)
    for message in outcome.messages:
        print(message)
    for artifact in outcome.artifacts:
        logger.info("Artefato gravado: %s", artifact)
    return outcome.status


def _split(raw: Optional[str]) -> Optional[Tuple[str, ...]]:
    if raw is None:
        return None
    return tuple(part.strip() for part in raw.split(",") if part.strip())


def _create_argument_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Simula e analisa redes regulatorias em tempo discreto.")
    parser.add_argument("command", choices=COMMANDS, help="Analise a executar")
    source = parser.add_argument_group("rede")
    source.add_argument("--preset", help=f"Rede pre-definida ({', '.join(PresetRegistry().names())}, {RANDOM_PRESET})")
    source.add_argument("--network", metavar="ARQUIVO", help="Arquivo JSON com a rede")
    source.add_argument("--a", help="Taxa de contracao (ex.: 93/100 ou 0.93)")
    source.add_argument("--threshold", help="Limiar aplicado a todas as interacoes do preset")
    source.add_argument("--dimension", type=int, help="Numero de unidades (circuit e random)")
    source.add_argument("--signs", help="Sinais do circuito separados por virgula (ex.: 1,-1)")
    source.add_argument("--density", type=float, default=0.5, help="Densidade de arestas para o preset random")
    run_group = parser.add_argument_group("execucao")
    run_group.add_argument("--t-max", dest="t_max", type=int, default=50, help="Horizonte de tempo")
    run_group.add_argument("--mode", dest="engine_mode", choices=("itinerary-exact", "injective-fast"), default="itinerary-exact")
    run_group.add_argument("--numeric", dest="numeric_mode", choices=("rational", "float"), default="rational")
    run_group.add_argument("--epsilon", type=float, default=1e-12, help="Tolerancia do modo float")
    run_group.add_argument("--max-atoms", dest="max_atoms", type=int, default=1_000_000)
    run_group.add_argument("--max-seconds", dest="max_seconds", type=float, default=None)
    run_group.add_argument("--seed", type=int, default=42)
    run_group.add_argument("--x0", help="Condicao inicial separada por virgula")
    run_group.add_argument("--a-values", dest="a_values", help="Valores de a para o sweep")
    run_group.add_argument("--threshold-values", dest="threshold_values", help="Valores de limiar para o sweep")
    run_group.add_argument("--dump-atoms", dest="dump_atoms", action="store_true", help="Grava os atomos finais")
    parser.add_argument("--out", dest="output_dir", metavar="DIR", help="Diretorio de saida (padrao: results/)")
    parser.add_argument("--verbose", action="store_true", help="Ativa mensagens de depuracao")
    return parser


def _run_config_from_args(args: argparse.Namespace) -> RunConfig:
    signs = _split(args.signs)
    return RunConfig(
        command=args.command,
        preset=args.preset,
        network=Path(args.network) if args.network else None,
        t_max=args.t_max,
        engine_mode=args.engine_mode,
        numeric_mode=args.numeric_mode,
        epsilon=args.epsilon,
        output_dir=Path(args.output_dir) if args.output_dir else None,
        seed=args.seed,
        max_atoms=args.max_atoms,
        max_seconds=args.max_seconds,
        a=args.a,
        threshold=args.threshold,
        dimension=args.dimension,
        signs=tuple(int(v) for v in signs) if signs else None,
        x0=_split(args.x0),
        a_values=_split(args.a_values) or (),
        threshold_values=_split(args.threshold_values) or (),
        density=args.density,
        dump_atoms=args.dump_atoms,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _create_argument_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        run_config = _run_config_from_args(args)
    except ValueError as exc:
        parser.error(str(exc))
    return run(run_config)


if __name__ == "__main__":
    raise SystemExit(main())
