"""Command-line front end: ``qbc compress | rdc | verify``."""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .accounting import B_E_MODES, SCHEMES
from .blocks import log2_exact
from .image_io import GrayImage, ImageError, open_input, save_pgm
from .metrics import DEFAULT_QFS, psnr
from .pipeline import Codec
from .sim.simulator import QubitBudgetError
from .verify import VERIFY_COLUMNS, verify_block

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_PIPELINE = 0, 2, 3, 4
REPORT_COLUMNS = ("qf", "scheme", "n_tcn", "q_ones", "s_state", "s_bit", "a_bit", "b_e",
                  "br_bits", "psnr_db", "clamped_count")
RDC_COLUMNS = ("scheme", "qf", "br_bits", "psnr_db")
UNITS = {"bits": 1, "B": 8, "KB": 8 * 1024, "MB": 8 * 1024 * 1024}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    input: str = ""
    qfs: list = field(default_factory=lambda: list(DEFAULT_QFS))
    schemes: list = field(default_factory=lambda: list(SCHEMES))
    q: int = 8
    block: int = 16
    b_e_mode: str = "per-block-address"
    output_dir: str = ""
    verify_circuits: bool = True
    verify_block_limit: int = 4
    units: str = "bits"

    def validate(self) -> "RunConfig":
        if not self.input:
            raise ConfigError("no input given (path or synth:<kind>[:<param>]:<W>x<H>)")
        if not self.qfs or any(int(v) < 1 for v in self.qfs):
            raise ConfigError("qfs must be a non-empty list of integers >= 1")
        self.qfs = [int(v) for v in self.qfs]
        self.schemes = [s.upper() for s in self.schemes]
        if not self.schemes or any(s not in SCHEMES for s in self.schemes):
            raise ConfigError(f"schemes must be a non-empty subset of {sorted(SCHEMES)}")
        if not 1 <= self.q <= 12:
            raise ConfigError("q must lie in [1, 12]")
        try:
            log2_exact(self.block)
        except ValueError:
            raise ConfigError("block must be a power of two in [2, 16]") from None
        if not 2 <= self.block <= 16:
            raise ConfigError("block must be a power of two in [2, 16]")
        if self.b_e_mode not in B_E_MODES:
            raise ConfigError(f"b_e_mode must be one of {', '.join(B_E_MODES)}")
        if self.verify_block_limit < 0:
            raise ConfigError("verify_block_limit must be >= 0")
        if self.units not in UNITS:
            raise ConfigError(f"units must be one of {', '.join(UNITS)}")
        if not self.output_dir:
            self.output_dir = os.environ.get("QBC_OUTPUT_DIR") or "qbc-out"
        return self


def _fmt_psnr(v: float) -> str:
    return "inf" if math.isinf(v) else f"{v:.6f}"


def _fmt_rate(bits: int, units: str) -> str:
    if units == "bits":
        return f"{bits} bits"
    return f"{bits / UNITS[units]:.3f} {units}"


def _prepare(cfg: RunConfig):
    try:
        image = open_input(cfg.input)
    except ImageError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return image, out


def _write_run_json(cfg: RunConfig, out: Path, command: str) -> None:
    doc = {"command": command, **asdict(cfg)}
    (out / "run.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _sweep(cfg: RunConfig, image: GrayImage, out: Path):
    """Yield (qf, encoded, psnr) and write one reconstruction per qf."""
    codec = Codec(image, cfg.block, cfg.q)
    for qf in sorted(set(cfg.qfs)):
        enc = codec.encode(qf)
        save_pgm(enc.reconstruction, out / f"recon_qf{qf}.pgm")
        yield qf, enc, psnr(image, enc.reconstruction)


def cmd_compress(cfg: RunConfig) -> int:
    image, out = _prepare(cfg)
    rows = []
    for qf, enc, p in _sweep(cfg, image, out):
        for scheme in cfg.schemes:
            r = enc.report(scheme, cfg.b_e_mode)
            rows.append([qf, r.scheme, r.n_tcn, r.q_ones, r.s_state, r.s_bit, r.a_bit, r.b_e,
                         r.br, _fmt_psnr(p), r.clamped_count])
            print(f"qf={qf} {r.scheme}: br={_fmt_rate(r.br, cfg.units)} n_tcn={r.n_tcn} "
                  f"psnr={_fmt_psnr(p)} dB")
    _write_csv(out / "report.csv", REPORT_COLUMNS, rows)
    _write_run_json(cfg, out, "compress")
    return EXIT_OK


def cmd_rdc(cfg: RunConfig) -> int:
    image, out = _prepare(cfg)
    points = {s: [] for s in cfg.schemes}
    for qf, enc, p in _sweep(cfg, image, out):
        for scheme in cfg.schemes:
            points[scheme].append((qf, enc.report(scheme, cfg.b_e_mode).br, p))
    rows = [[s, qf, br, _fmt_psnr(p)] for s in cfg.schemes for qf, br, p in points[s]]
    _write_csv(out / "rdc.csv", RDC_COLUMNS, rows)
    with open(out / "rdc.dat", "w", newline="\n") as fh:
        for k, s in enumerate(cfg.schemes):
            if k:
                fh.write("\n\n")
            fh.write(f"# {s}: br_bits psnr_db\n")
            for _, br, p in points[s]:
                fh.write(f"{br} {_fmt_psnr(p)}\n")
    _write_run_json(cfg, out, "rdc")
    for s in cfg.schemes:
        lo, hi = points[s][0], points[s][-1]
        print(f"{s}: qf {lo[0]}..{hi[0]}, br {_fmt_rate(lo[1], cfg.units)} -> "
              f"{_fmt_rate(hi[1], cfg.units)}")
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    image, out = _prepare(cfg)
    _write_run_json(cfg, out, "verify")
    qf = cfg.qfs[0]
    enc = Codec(image, cfg.block, cfg.q).encode(qf)
    candidates = [b for b in enc.blocks() if b.n_tcn > 0][: cfg.verify_block_limit]
    rows, skipped = [], []
    if cfg.verify_circuits:
        for b in candidates:
            try:
                rows.append(verify_block(b))
            except QubitBudgetError as exc:
                skipped.append((b.block_x, b.block_y, str(exc)))
                print(f"skipped block ({b.block_x}, {b.block_y}): {exc}", file=sys.stderr)
    _write_csv(out / "verify.csv", VERIFY_COLUMNS, [r.csv_row() for r in rows])
    if skipped:
        _write_csv(out / "verify_skipped.csv", ("block_x", "block_y", "reason"), skipped)
    print(f"verified {len(rows)} block(s) at qf={qf}, skipped {len(skipped)}")
    if skipped and not rows:
        return EXIT_PIPELINE
    return EXIT_OK


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


COMMANDS = {"compress": cmd_compress, "rdc": cmd_rdc, "verify": cmd_verify}


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _str_list(text: str) -> list[str]:
    return [v for v in text.replace(",", " ").split() if v]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", nargs="?", help="image path (PGM/PNG) or synth:<kind>[:<param>]:<W>x<H>")
    common.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
    common.add_argument("--qfs", type=_int_list, help="quantization factors, e.g. 1,2,4,8")
    common.add_argument("--schemes", type=_str_list, help="subset of SCMNEQR,EFRQI")
    common.add_argument("-q", type=int, dest="q", help="value qubits (default 8)")
    common.add_argument("--block", type=int, help="quantum block size (default 16)")
    common.add_argument("--b-e-mode", dest="b_e_mode", choices=B_E_MODES)
    common.add_argument("-o", "--output-dir", dest="output_dir",
                        help="output directory (default $QBC_OUTPUT_DIR or ./qbc-out)")
    common.add_argument("--verify-block-limit", dest="verify_block_limit", type=int)
    common.add_argument("--no-verify", dest="verify_circuits", action="store_false", default=None)
    common.add_argument("--units", choices=tuple(UNITS), help="display unit for bit rates")

    p = argparse.ArgumentParser(prog="qbc", description="Block-wise quantum image compression")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("compress", parents=[common], help="compress at each qf and report costs")
    sub.add_parser("rdc", parents=[common], help="rate-distortion curve data")
    sub.add_parser("verify", parents=[common], help="simulate block circuits")
    return p


def resolve_config(args: argparse.Namespace) -> RunConfig:
    base = {}
    if args.config:
        try:
            with open(args.config) as fh:
                base = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {args.config} is not valid JSON: {exc}") from None
        known = {f.name for f in fields(RunConfig)}
        unknown = set(base) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for f in fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            base[f.name] = v
    try:
        cfg = RunConfig(**base)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    return cfg.validate()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"qbc: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ImageError as exc:
        print(f"qbc: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"qbc: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"qbc: pipeline error: {exc}", file=sys.stderr)
        return EXIT_PIPELINE


if __name__ == "__main__":
    sys.exit(main())
