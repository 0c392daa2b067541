"""``v6taxon`` command line front end.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import logging
import sys

from . import addrarray, plot, synth, temporal
from .addr_core import Address, AddressParseError, parse_address
from .ingest import FILTERS, ingest, read_days
from .spatial import DENSITY_CSV_HEADER, PLOT_RESOLUTIONS, RESOLUTIONS, density_report, mra_ratios, population_distribution
from .taxonomy import classify_format, format_ipv4, format_mac, parse_mac
from .trie import CountingTrie, DensityClass, aggregate_counts, dense_fixed_length_array

logger = logging.getLogger("v6taxon")

EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@contextlib.contextmanager
def _open_in(path):
    if path in (None, "-"):
        yield sys.stdin
    else:
        with open(path, encoding="utf-8") as f:
            yield f


@contextlib.contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as f:
            yield f


def _writer(out):
    return csv.writer(out, lineterminator="\n")


def _days_arg(text):
    try:
        return temporal.parse_day_range(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _day_arg(text):
    try:
        return temporal.parse_day(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _class_arg(text):
    try:
        return DensityClass.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _load_days(args):
    first, last = args.days
    try:
        arr = read_days(args.data_dir, first, last)
    except FileNotFoundError as e:
        raise DataError(f"missing day-file: {e.args[0]}")
    if len(arr) == 0:
        raise DataError("no addresses in the selected days")
    return arr


# -- subcommands ------------------------------------------------------------------


def cmd_ingest(args):
    try:
        with _open_in(args.input) as f:
            summary = ingest(f, args.day, args.data_dir, args.filter)
    except OSError as e:
        raise DataError(f"cannot read input: {e}")
    with _open_out(args.output) as out:
        _writer(out).writerows(summary.as_rows())
    return 0


def cmd_taxonomy(args):
    bad = 0
    with _open_in(args.input) as f, _open_out(args.output) as out:
        w = _writer(out)
        w.writerow(("address", "kind", "embedded_ipv4", "mac"))
        for line in f:
            text = line.strip().partition(",")[0]
            if not text or text.startswith("#"):
                continue
            try:
                a = parse_address(text)
            except AddressParseError as e:
                bad += 1
                logger.warning("%s", e)
                continue
            fc = classify_format(a)
            w.writerow(
                (
                    str(a),
                    fc.kind.value,
                    format_ipv4(fc.embedded_ipv4) if fc.embedded_ipv4 is not None else "",
                    format_mac(fc.mac) if fc.mac is not None else "",
                )
            )
    if bad:
        logger.warning("%d unparseable line(s) skipped", bad)
    return 0


def _stability_log(args, required, optional):
    prefix_len = args.prefix_len or 128
    try:
        log = temporal.load_log(args.data_dir, required=required, optional=optional, prefix_len=128)
    except FileNotFoundError as e:
        raise DataError(f"missing day-file: {e.args[0]}")
    return log.derive(prefix_len) if prefix_len != 128 else log


def _format_member(value, prefix_len):
    text = str(Address(value))
    return f"{text}/{prefix_len}" if prefix_len != 128 else text


def cmd_stability(args):
    modes = sum(x is not None for x in (args.ref_day, args.week, args.period_a))
    if modes != 1 or (args.period_a is None) != (args.period_b is None):
        raise UsageError("choose exactly one of --ref-day, --week, or --period-a with --period-b")
    prefix_len = args.prefix_len or 128
    unit = f" /{prefix_len}s" if prefix_len != 128 else ""
    out_rows = []

    if args.period_a is not None:
        try:
            temporal._check_disjoint(args.period_a, args.period_b)
        except ValueError as e:
            raise UsageError(str(e))
        days = list(range(args.period_a[0], args.period_a[1] + 1)) + list(range(args.period_b[0], args.period_b[1] + 1))
        log = _stability_log(args, days, ())
        members = temporal.stable_across(log, args.period_a, args.period_b)
        active = log.active(*args.period_a)
        label = temporal.epoch_label(args.period_a, args.period_b)
    else:
        cls = temporal.StabilityClass(args.n, args.before, args.after)
        if args.week is not None:
            first, last = args.week
            if last - first != 6:
                raise UsageError("--week needs a 7-day range")
            ref_days = list(range(first, last + 1))
        else:
            ref_days = [args.ref_day]
        window = range(ref_days[0] - args.before, ref_days[-1] + args.after + 1)
        log = _stability_log(args, ref_days, [d for d in window if d not in ref_days])
        if args.week is not None:
            members = temporal.weekly_unique_stable(log, ref_days, args.n, args.before, args.after, args.slew_tolerance)
        else:
            members = temporal.nd_stable(log, args.ref_day, args.n, args.before, args.after, args.slew_tolerance)
        active = log.active(ref_days[0], ref_days[-1])
        label = cls.label

    out_rows.append((f"active{unit}", len(active)))
    out_rows.append((f"{label}{unit}", len(members)))
    out_rows.append((f"not {label}{unit}", len(active - members)))
    with _open_out(args.output) as out:
        for name, count in out_rows:
            out.write(f"{name}: {count}\n")
        if args.members:
            for v in sorted(members):
                out.write(_format_member(v, prefix_len) + "\n")
    return 0


def cmd_mra(args):
    ks = args.k or [1]
    arr = _load_days(args)
    counts = aggregate_counts(arr)
    series = [mra_ratios(counts, k) for k in ks]
    with _open_out(args.output) as out:
        w = _writer(out)
        w.writerow(("k", "p", "n_p", "n_p_plus_k", "ratio"))
        for s in series:
            w.writerows(s.csv_rows())
        for s in series:
            out.write(f"# k={s.k} product_of_ratios={s.product()} distinct_addresses={counts.total}\n")
    if args.svg:
        plot.mra_svg(series if args.k else [mra_ratios(counts, k) for k in PLOT_RESOLUTIONS], args.svg, args.title)
    return 0


def cmd_densify(args):
    arr = _load_days(args)
    with _open_out(args.output) as out:
        if args.table:
            w = _writer(out)
            w.writerow(DENSITY_CSV_HEADER)
            w.writerows(row.csv_row() for row in density_report(arr, args.density))
            return 0
        reports = []
        if args.fixed_length:
            reports = [dense_fixed_length_array(arr, c) for c in args.density]
        else:
            trie = CountingTrie()
            for a in addrarray.to_ints(arr):
                trie.insert(a)
            trie.freeze()
            reports = [trie.densify(c) for c in args.density]
        if args.csv:
            w = _writer(out)
            w.writerow(("class", "prefix", "len", "count", "span", "density"))
            for r in reports:
                w.writerows((str(r.density),) + row for row in r.csv_rows())
        else:
            for r in reports:
                if len(args.density) > 1:
                    out.write(f"# {r.density}\n")
                for line in r.lines():
                    out.write(line + "\n")
    return 0


def cmd_popdist(args):
    arr = _load_days(args)
    with _open_out(args.output) as out:
        w = _writer(out)
        w.writerow(("p", "population", "prefixes", "ccdf"))
        for p in args.prefix_len:
            dist = population_distribution(arr, p)
            for x, frac in dist.ccdf:
                w.writerow((p, x, dist.counts[x], f"{float(frac):.10g}"))
    return 0


def cmd_synth(args):
    params = {}
    if args.scheme in ("privacy", "eui64"):
        params.update(prefixes=args.prefixes, per_prefix=args.per_prefix)
    if args.scheme == "sequential-pool":
        params.update(pools=args.prefixes, per_pool=args.per_prefix)
    if args.scheme == "dynamic-64-pool":
        params.update(hosts=args.hosts, day=args.day or 0)
    if args.base:
        params["base"] = args.base
    if args.scheme == "eui64":
        params["ouis"] = args.ouis
        if args.mac:
            try:
                params["macs"] = [parse_mac(m) for m in args.mac]
            except ValueError as e:
                raise UsageError(str(e))
    try:
        arr = synth.generate(args.scheme, seed=args.seed, **params)
    except ValueError as e:
        raise UsageError(str(e))
    with _open_out(args.output) as out:
        for line in synth.lines(arr):
            out.write(line + "\n")
    return 0


# -- parser -----------------------------------------------------------------------


def build_parser():
    parser = Parser(prog="v6taxon", description="Classify active IPv6 address populations.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=Parser)

    def add(name, fn, help):
        p = sub.add_parser(name, help=help)
        p.set_defaults(func=fn)
        p.add_argument("-o", "--output", default="-", help="output file (default stdout)")
        return p

    def data_dir(p):
        p.add_argument("--data-dir", default=".", help="directory holding YYYYMMDD.addrset day-files")

    p = add("ingest", cmd_ingest, "ingest an address log into a day-file")
    data_dir(p)
    p.add_argument("--day", type=_day_arg, required=True, help="YYYYMMDD")
    p.add_argument("-i", "--input", default="-", help="address lines, optionally ADDRESS,HITS")
    p.add_argument("--filter", choices=FILTERS, default="all", help="'other' drops Teredo, 6to4 and ISATAP")

    p = add("taxonomy", cmd_taxonomy, "classify addresses by format")
    p.add_argument("-i", "--input", default="-")

    p = add("stability", cmd_stability, "temporal stability classes")
    data_dir(p)
    p.add_argument("--ref-day", type=_day_arg)
    p.add_argument("--week", type=_days_arg, help="7-day range of reference days (unique nd-stable)")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--before", type=int, default=7)
    p.add_argument("--after", type=int, default=7)
    p.add_argument("--prefix-len", type=int, default=0, help="0 = full addresses, 64 = /64s")
    p.add_argument("--slew-tolerance", type=int, choices=(0, 1), default=0)
    p.add_argument("--period-a", type=_days_arg)
    p.add_argument("--period-b", type=_days_arg)
    p.add_argument("--members", action="store_true", help="also list the stable addresses")

    p = add("mra", cmd_mra, "multi-resolution aggregate count ratios")
    data_dir(p)
    p.add_argument("--days", type=_days_arg, required=True)
    p.add_argument("--k", type=int, action="append", choices=RESOLUTIONS)
    p.add_argument("--svg", help="also render an MRA plot")
    p.add_argument("--title")

    p = add("densify", cmd_densify, "dense prefix discovery")
    data_dir(p)
    p.add_argument("--days", type=_days_arg, required=True)
    p.add_argument("--class", dest="density", type=_class_arg, action="append", required=True, help="n@p, e.g. 2@112")
    p.add_argument("--fixed-length", action="store_true", help="only length-p prefixes (no trie)")
    p.add_argument("--csv", action="store_true")
    p.add_argument("--table", action="store_true", help="density summary, one row per class")

    p = add("popdist", cmd_popdist, "aggregate population distribution (CCDF)")
    data_dir(p)
    p.add_argument("--days", type=_days_arg, required=True)
    p.add_argument("--prefix-len", type=int, action="append", required=True)

    p = add("synth", cmd_synth, "generate a synthetic address population")
    p.add_argument("--scheme", choices=synth.SCHEMES, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--prefixes", type=int, default=50, help="/64s (privacy, eui64) or pools")
    p.add_argument("--per-prefix", type=int, default=200)
    p.add_argument("--hosts", type=int, default=100, help="dynamic-64-pool population")
    p.add_argument("--day", type=_day_arg, help="dynamic-64-pool draw day")
    p.add_argument("--base", help="covering prefix for generated /64s")
    p.add_argument("--ouis", type=int, default=4)
    p.add_argument("--mac", action="append", help="explicit MAC for eui64 (repeatable)")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(levelname)s: %(message)s")
    if getattr(args, "prefix_len", None) is not None and isinstance(args.prefix_len, list):
        if any(not 0 <= p <= 128 for p in args.prefix_len):
            parser.error("--prefix-len must be within 0..128")
    elif getattr(args, "prefix_len", 0) and not 0 <= args.prefix_len <= 128:
        parser.error("--prefix-len must be within 0..128")
    try:
        return args.func(args)
    except UsageError as e:
        parser.error(str(e))
    except (DataError, OSError, ValueError) as e:
        print(f"v6taxon: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
