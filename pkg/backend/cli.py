"""
Command-line entry point.

    python cli.py validate --code data/codes/csoc_3_2_13.json
    python cli.py search-code --k 8 --J 4 --max-m 160 --out csoc_9_8.json
    python cli.py encode --in message.bin --out message.frames --config params.json
    python cli.py decode --in message.frames --out message.out --config params.json
    python cli.py simulate --preset rate-half --ebno 1.0:2.5:0.25 --out results/rate-half.csv
    python cli.py analyze --block-size 400 --coupling-memory 1 --window 3 --ih 4
    python cli.py gen-interleaver --length 400 --seed 7 --out pi.txt

Exit codes: 0 success, 1 unexpected failure, 2 usage, 3 invalid code,
4 invalid parameters, 5 file errors, 6 config-hash mismatch.
"""

import argparse
import json
import logging
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from pydantic import ValidationError

from core.analysis.complexity import AnalysisMode, computation, pcc_reference
from core.channel.awgn import SnrPoint, frame_rng, noiseless_llr, transmit_frame
from core.codes.code_registry import DEFAULT_CODE, CodeSpecification, get_code, load_code_file, save_code_file
from core.codes.code_search import search_csoc
from core.codes.csoc import CsocCode, build_check_sets, validate_self_orthogonality
from core.decoders.window import WindowDecoder
from core.errors import (
    AnalysisModeError,
    CodeStructureError,
    ConfigHashMismatchError,
    CouplingConfigError,
    DimensionMismatchError,
    FrameFormatError,
    NotSelfOrthogonalError,
    ParameterError,
    PresetError
)
from core.scpcc.codec import RateConvention, code_rate, encode_frame
from core.scpcc.coupling import build_interleaver
from core.scpcc.params import ScPccParams
from core.settings import get_settings
from core.simulation.harness import SimConfig, resume, run_sweep
from core.simulation.presets import resolve_preset
from output_formats.frame_io import bytes_to_source_blocks, read_frames, source_blocks_to_bytes, write_frames
from output_formats.report_formatter import format_analysis_json, format_analysis_table
from utils.enhanced_logger import configure_logging, log_error, log_processing_step

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_USAGE = 2
EXIT_INVALID_CODE = 3
EXIT_BAD_CONFIG = 4
EXIT_IO = 5
EXIT_HASH_MISMATCH = 6


class UsageError(Exception):
    """Arguments parse but do not describe a runnable command."""


# flag -> ScPccParams field
PARAM_FLAGS = {
    'block_size': 'block_size',
    'coupling_memory': 'coupling_memory',
    'frame_length': 'frame_length',
    'window': 'window_size',
    'iv': 'vertical_iterations',
    'ih': 'horizontal_iterations',
    'boxplus': 'boxplus_mode',
    'extrinsic_scale': 'extrinsic_scale',
    'extrinsic_limit': 'extrinsic_limit',
    'termination': 'termination',
    'schedule': 'schedule',
    'interleaver_seed': 'interleaver_seed'
}


def parse_ebno(text: str) -> List[float]:
    """'1,1.5,2' or 'start:stop:step' (stop inclusive)."""
    text = text.strip()
    if not text:
        return []
    if ":" in text:
        try:
            start, stop, step = (float(part) for part in text.split(":"))
        except ValueError as exc:
            raise UsageError(f"bad E_b/N_0 range {text!r}, expected start:stop:step") from exc
        if step <= 0 or stop < start:
            raise UsageError(f"bad E_b/N_0 range {text!r}")
        count = int(round((stop - start) / step)) + 1
        return [round(start + i * step, 6) for i in range(count)]
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise UsageError(f"bad E_b/N_0 list {text!r}") from exc


def _load_json(path: str) -> Dict[str, Any]:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParameterError(f"{path}: not valid JSON ({exc})") from exc


def _load_code(path: Optional[str]) -> Optional[CsocCode]:
    if not path:
        return None
    return load_code_file(path).code


def resolve_params(args: argparse.Namespace) -> ScPccParams:
    """Params from --config (params or simulation config), then --code, then single flags."""
    data: Dict[str, Any] = {}
    if getattr(args, 'config', None):
        data = _load_json(args.config)
        if 'config' in data and 'config_hash' in data:
            data = data['config']
        if 'params' in data:
            data = data['params']
    code = _load_code(getattr(args, 'code', None))
    if code is not None:
        data['code'] = code
    data.setdefault('code', DEFAULT_CODE)
    data.setdefault('block_size', 400)
    for flag, field in PARAM_FLAGS.items():
        value = getattr(args, flag, None)
        if value is not None:
            data[field] = value
    return ScPccParams.model_validate(data)


def _add_param_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("code parameters")
    group.add_argument("--code", help="component code file (JSON)")
    group.add_argument("--config", help="params or simulation config file (JSON)")
    group.add_argument("--block-size", type=int, help="T, bits per source block")
    group.add_argument("--coupling-memory", type=int, help="m_sc")
    group.add_argument("--frame-length", type=int, help="L, source blocks per frame")
    group.add_argument("--window", type=int, help="window size w")
    group.add_argument("--iv", type=int, help="vertical iterations I_V")
    group.add_argument("--ih", type=int, help="horizontal iterations I_H")
    group.add_argument("--boxplus", choices=["exact", "approx"])
    group.add_argument("--extrinsic-scale", type=float)
    group.add_argument("--extrinsic-limit", type=float, help="clip bound on the exchanged a priori")
    group.add_argument("--termination", choices=["terminate-blocks", "unterminated"])
    group.add_argument("--schedule", choices=["window", "block"])
    group.add_argument("--interleaver-seed", type=int)


# ---------------------------------------------------------------- commands

def cmd_validate(args: argparse.Namespace) -> int:
    spec = load_code_file(args.code) if args.code else CodeSpecification(DEFAULT_CODE, get_code(DEFAULT_CODE))
    code = spec.code
    report = validate_self_orthogonality(code)
    print(f"code {spec.name}: k={code.k} m={code.m} J={code.J} rate={code.k}/{code.k + 1}")
    for i, bits in enumerate(code.to_bit_strings()):
        print(f"  g{i}: {bits}")
    print(report.message)
    if not report.valid:
        return EXIT_INVALID_CODE
    if args.verbose:
        for i in range(code.k):
            for check in build_check_sets(code).for_stream(i):
                members = " ".join(f"({p.stream},{p.offset})" for p in check.participants)
                print(f"  stream {i} check @+{check.offset}: {members}")
    return EXIT_OK


def cmd_search_code(args: argparse.Namespace) -> int:
    code = search_csoc(args.k, args.J, args.max_m, seed=args.seed, restarts=args.restarts,
                       max_nodes=args.max_nodes)
    if code is None:
        print(f"no ({args.k + 1},{args.k},m) code with J={args.J} and m <= {args.max_m} found",
              file=sys.stderr)
        return EXIT_INVALID_CODE
    name = Path(args.out).stem if args.out else f"csoc_{args.k + 1}_{args.k}_{code.m}"
    spec = CodeSpecification(
        name=name, code=code,
        description=f"found by search (J={args.J}, max_m={args.max_m}, seed={args.seed})"
    )
    if args.out:
        save_code_file(spec, args.out)
    print(json.dumps(spec.to_dict(), indent=2))
    return EXIT_OK


def cmd_encode(args: argparse.Namespace) -> int:
    params = resolve_params(args)
    payload = Path(args.input).read_bytes()
    blocks = bytes_to_source_blocks(payload, params)
    coupling = params.coupling_map()
    frames = [encode_frame(params, block, coupling=coupling) for block in blocks]
    write_frames(args.out, params, frames, payload_bytes=len(payload))
    print(f"encoded {len(payload)} bytes into {len(frames)} frames "
          f"(rate {float(code_rate(params, RateConvention.TRANSMITTED)):.4f}), config {params.config_hash()[:12]}")
    return EXIT_OK


def cmd_decode(args: argparse.Namespace) -> int:
    params = resolve_params(args)
    frames, header = read_frames(args.input, params)
    decoder = WindowDecoder(params, trace=args.trace)
    snr = SnrPoint.for_params(args.ebno_db, params) if args.ebno_db is not None else None
    seed = args.seed if args.seed is not None else get_settings().default_seed

    decoded, reports = [], []
    for index, frame in enumerate(frames):
        if snr is None:
            received = noiseless_llr(frame)
        else:
            received = transmit_frame(frame, snr, frame_rng(seed, 0, index))
        decisions, report = decoder.decode(received)
        decoded.append(decisions)
        reports.append(report)

    Path(args.out).write_bytes(source_blocks_to_bytes(np.stack(decoded), header['payload_bytes']))
    if args.report:
        Path(args.report).write_text("\n\n".join(
            f"frame {index}\n{report.to_text()}" for index, report in enumerate(reports)
        ) + "\n", encoding="utf-8")
    print(f"decoded {len(frames)} frames into {header['payload_bytes']} bytes")
    return EXIT_OK


def _simulation_configs(args: argparse.Namespace, ebno: List[float]) -> List[SimConfig]:
    threads = args.threads if args.threads is not None else get_settings().threads
    seed = args.seed if args.seed is not None else get_settings().default_seed
    limits: Dict[str, Any] = {'threads': threads, 'master_seed': seed}
    if args.max_frames is not None:
        limits['max_frames'] = args.max_frames
    if args.min_errors is not None:
        limits['min_bit_errors'] = args.min_errors
    if args.batch_size is not None:
        limits['batch_size'] = args.batch_size
    if args.uncoded:
        limits['uncoded'] = True
    if args.record_timing:
        limits['record_timing'] = True

    if args.preset:
        entries = resolve_preset(args.preset, code_path=args.code, seed=seed)
        if args.entry:
            entries = [entry for entry in entries if entry.label in args.entry]
            if not entries:
                raise UsageError(f"preset {args.preset} has no entries named {args.entry}")
        out = Path(args.out) if args.out else None
        configs = []
        for entry in entries:
            path = str(out.with_name(f"{out.stem}-{entry.label}{out.suffix or '.csv'}")) if out else None
            configs.append(SimConfig(params=entry.params, ebno_db_list=ebno, output_path=path, **limits))
        return configs

    if args.config:
        data = _load_json(args.config)
        if 'config' in data and 'config_hash' in data:
            data = data['config']
        if 'params' in data:
            merged = {key: value for key, value in data.items() if key != 'params'}
            merged.update(limits)
            if args.ebno is None and merged.get('ebno_db_list'):
                ebno = merged['ebno_db_list']
            merged['ebno_db_list'] = ebno
            if args.out:
                merged['output_path'] = args.out
            if not ebno:
                raise UsageError("no E_b/N_0 points given (--ebno)")
            return [SimConfig(params=resolve_params(args), **merged)]

    if not ebno:
        raise UsageError("no E_b/N_0 points given (--ebno)")
    return [SimConfig(params=resolve_params(args), ebno_db_list=ebno, output_path=args.out, **limits)]


def cmd_simulate(args: argparse.Namespace) -> int:
    ebno = parse_ebno(args.ebno) if args.ebno is not None else []
    if not ebno and not args.config:
        raise UsageError("no E_b/N_0 points given (--ebno)")
    for config in _simulation_configs(args, ebno):
        started = time.perf_counter()
        if args.resume:
            stats = resume(config)
        else:
            stats = run_sweep(config)
        print(f"config {config.config_hash()[:12]}"
              + (f" -> {config.output_path}" if config.output_path else ""))
        for point in stats:
            print(f"  {point.ebno_db:6.2f} dB  frames={point.frames:<7d} "
                  f"bit_errors={point.bit_errors:<7d} BER={point.ber:.3e}  FER={point.fer:.3e}")
        logger.info(f"simulation finished in {time.perf_counter() - started:.1f}s")
    return EXIT_OK


def cmd_analyze(args: argparse.Namespace) -> int:
    params = resolve_params(args)
    report = computation(params, args.mode)
    reference = computation(pcc_reference(params), args.mode) if args.compare_pcc else None
    if args.format == "json":
        text = format_analysis_json(report, reference, config_hash=params.config_hash())
    else:
        text = format_analysis_table(report, reference, config_hash=params.config_hash())
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    print(text)
    return EXIT_OK


def cmd_gen_interleaver(args: argparse.Namespace) -> int:
    seed = args.seed if args.seed is not None else get_settings().default_seed
    interleaver = build_interleaver(args.length, seed=seed, identity=args.identity)
    if args.out:
        interleaver.save(args.out)
    else:
        sys.stdout.write(interleaver.to_text())
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scpcc", description="SC-PCC threshold decoding toolkit")
    parser.add_argument("--log-dir", help="write rotating log files to this directory")
    parser.add_argument("-v", "--verbose", action="store_true")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("validate", help="check a code for self-orthogonality")
    p.add_argument("--code", help="code file (default: shipped (3,2,13) code)")
    p.set_defaults(handler=cmd_validate)

    p = commands.add_parser("search-code", help="search a self-orthogonal code")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--J", type=int, required=True)
    p.add_argument("--max-m", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--max-nodes", type=int, default=200_000)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_search_code)

    p = commands.add_parser("encode", help="encode a file into SC-PCC frames")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    _add_param_flags(p)
    p.set_defaults(handler=cmd_encode)

    p = commands.add_parser("decode", help="decode SC-PCC frames back into a file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--ebno-db", type=float, help="pass the frames through AWGN at this E_b/N_0 first")
    p.add_argument("--seed", type=int, help="noise seed")
    p.add_argument("--report", help="write per-frame decode reports here")
    p.add_argument("--trace", action="store_true", help="include the schedule trace in reports")
    _add_param_flags(p)
    p.set_defaults(handler=cmd_decode)

    p = commands.add_parser("simulate", help="BER/FER sweep over E_b/N_0")
    p.add_argument("--ebno", help="'1,1.5,2' or 'start:stop:step'")
    p.add_argument("--out", help="results CSV")
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--preset", help="rate-half (fig4), window-sweep (fig5) or high-rate (fig6)")
    p.add_argument("--entry", action="append", help="run only these preset entries")
    p.add_argument("--threads", type=int, help="worker processes (default SCPCC_THREADS or 1)")
    p.add_argument("--max-frames", type=int)
    p.add_argument("--min-errors", type=int)
    p.add_argument("--batch-size", type=int)
    p.add_argument("--uncoded", action="store_true", help="uncoded BPSK check mode")
    p.add_argument("--record-timing", action="store_true", help="write measured elapsed_s")
    p.add_argument("--resume", action="store_true", help="continue the sweep stored at --out")
    _add_param_flags(p)
    p.set_defaults(handler=cmd_simulate)

    p = commands.add_parser("analyze", help="latency, memory and operation counts")
    p.add_argument("--mode", choices=[m.value for m in AnalysisMode], default=AnalysisMode.EXACT.value)
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.add_argument("--compare-pcc", action="store_true", help="add the uncoupled PCC column")
    p.add_argument("--out")
    _add_param_flags(p)
    p.set_defaults(handler=cmd_analyze)

    p = commands.add_parser("gen-interleaver", help="write a seeded permutation file")
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--identity", action="store_true")
    p.add_argument("--out")
    p.set_defaults(handler=cmd_gen_interleaver)

    return parser


def dispatch(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    settings = get_settings()
    configure_logging(args.log_dir or settings.log_dir, verbose=args.verbose)
    started = time.perf_counter()

    try:
        code = args.handler(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CodeStructureError, NotSelfOrthogonalError) as exc:
        print(f"invalid code: {exc}", file=sys.stderr)
        return EXIT_INVALID_CODE
    except ConfigHashMismatchError as exc:
        print(f"config mismatch: {exc}", file=sys.stderr)
        return EXIT_HASH_MISMATCH
    except (FrameFormatError, OSError) as exc:
        print(f"file error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ParameterError, CouplingConfigError, DimensionMismatchError, AnalysisModeError,
            PresetError, ValidationError, KeyError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    except Exception as exc:
        error_id = log_error(exc, f"cli.{args.command}", argv=list(argv or sys.argv[1:]))
        print(f"unexpected error {error_id}: {exc}", file=sys.stderr)
        return EXIT_UNEXPECTED

    log_processing_step(
        f"cli.{args.command}", "success" if code == EXIT_OK else "failed",
        duration_ms=(time.perf_counter() - started) * 1000.0
    )
    return code


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
