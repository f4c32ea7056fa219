"""
Argument parsing for KahlerLab.

Subcommands and the compact full-help layout printed for -h/--help.
"""

import argparse


def _add_output_options(p: argparse.ArgumentParser) -> None:
	p.add_argument("--output", "-o", default=None, help="Report path (default: <output dir>/<suite>.json)")
	p.add_argument("--force", action="store_true", help="Overwrite existing output files without asking")
	p.add_argument("--workers", type=int, default=None, help="Worker processes (default: config MAX_WORKERS)")


def build_arg_parser() -> argparse.ArgumentParser:
	"""Build the argument parser for the application."""
	parser = argparse.ArgumentParser(
		prog="kahlerlab",
		description="KahlerLab - numerical verification of Kähler identities, spectra and Kuranishi families",
		formatter_class=argparse.RawTextHelpFormatter,
	)
	sub = parser.add_subparsers(dest="command", required=True, title="Commands", metavar="COMMAND")

	# Check dependencies command
	sub.add_parser("check", help="Run the import self-test and check dependencies")

	# List command
	p_list = sub.add_parser("list", help="List verification suites from suites/*.yml")
	p_list.add_argument("-a", action="store_true", help="Show full details (command and parameters)")

	# Inspect command
	p_inspect = sub.add_parser("inspect", help="Show the manifest and expanded tasks of one suite")
	p_inspect.add_argument("suite", help="Suite name to inspect")

	# Enable / disable commands
	p_enable = sub.add_parser("enable", help="Enable suite(s) in suites/<suite>.yml (set enabled: true)")
	p_enable.add_argument("suite", nargs="+", help="Suite name(s) to enable")
	p_disable = sub.add_parser("disable", help="Disable suite(s) in suites/<suite>.yml (set enabled: false)")
	p_disable.add_argument("suite", nargs="+", help="Suite name(s) to disable")

	# Identities command
	p_ident = sub.add_parser("identities", help="Check pointwise Kähler identities on random jets")
	p_ident.add_argument("--suite", default=None, help="Identity suite manifest to run")
	p_ident.add_argument("--check", action="append", default=None, metavar="NAME",
		help="Run a single check by name (repeatable; replaces the suite's checks)")
	p_ident.add_argument("--m", type=int, action="append", default=None, help="Complex dimension (repeatable)")
	p_ident.add_argument("--seeds", default=None, help='"50" for seeds 0..49, or a list such as "1,2,5-8"')
	p_ident.add_argument("--tolerance", type=float, default=None, help="Relative residual tolerance")
	p_ident.add_argument("--control", action="store_true", help="Also run each check with its hypothesis dropped")
	_add_output_options(p_ident)

	# Spectrum command
	p_spec = sub.add_parser("spectrum", help="Galerkin spectra of weighted Laplacians on CP1")
	p_spec.add_argument("--suite", default=None, help="Spectrum suite manifest to use as defaults")
	p_spec.add_argument("--manifold", default="cp1", choices=["cp1"], help="Manifold (only cp1)")
	p_spec.add_argument("--basis", type=int, default=None, help="Basis degree N; (N+1)^2 functions")
	p_spec.add_argument("--grid", default=None, help='Quadrature grid "RADIALxANGULAR", e.g. 32x64')
	p_spec.add_argument("--perturb", action="append", default=None, metavar="SPEC",
		help='Perturbed metric "eps=0.1,mode=quad" (repeatable; Fubini-Study always runs)')
	p_spec.add_argument("--samples", type=int, default=None, help="Random draws for the positivity check")
	p_spec.add_argument("--pairs", type=int, default=None, help="(u, v) pairs for the moment-map pairing")
	p_spec.add_argument("--seed", type=int, default=None, help="Seed for the random draws")
	p_spec.add_argument("--degrees", default=None, help='Basis degrees for the convergence table, e.g. "4,8,12"')
	p_spec.add_argument("--csv", default=None, help="Write the eigenvalue table as CSV")
	p_spec.add_argument("--plot", default=None, help="Write the convergence plot as SVG")
	_add_output_options(p_spec)

	# Kuranishi command
	p_kur = sub.add_parser("kuranishi", help="Solve the Maurer-Cartan equation on a finite DGLA")
	p_kur.add_argument("--suite", default=None, help="Kuranishi suite manifest to use as defaults")
	p_kur.add_argument("--dgla", default=None, help="Built-in DGLA name or path to a DGLA JSON file")
	p_kur.add_argument("--order", type=int, default=None, help="Truncation order in t")
	p_kur.add_argument("--expect-obstruction", dest="expect_obstruction", default=None, metavar="order=K",
		help="Pass only if the solve is obstructed at order K")
	_add_output_options(p_kur)

	# Run command
	p_run = sub.add_parser("run", help="Run one suite, or every enabled suite with --all")
	group_run = p_run.add_mutually_exclusive_group(required=True)
	group_run.add_argument("suite", nargs="?", help="Suite name. If omitted, use --all")
	group_run.add_argument("--all", action="store_true", help="Run all enabled suites")
	p_run.add_argument("--force", action="store_true", help="Overwrite existing reports without asking")
	p_run.add_argument("--workers", type=int, default=None, help="Worker processes (default: config MAX_WORKERS)")

	return parser


def format_full_help(parser: argparse.ArgumentParser) -> str:
	"""Generate comprehensive help output with a compact layout."""
	prog = parser.prog
	desc = parser.description or ""

	subparsers_actions = [
		action for action in getattr(parser, "_actions", [])
		if isinstance(action, argparse._SubParsersAction)
	]
	if not subparsers_actions:
		return parser.format_help()

	sub_action = subparsers_actions[0]
	choices = sub_action.choices
	short_help_map = {act.dest: (act.help or "") for act in sub_action._get_subactions()}

	desired_order = [
		"check", "list", "inspect", "enable", "disable", "identities", "spectrum", "kuranishi", "run"
	]
	names_in_choice = list(choices.keys())
	ordered_names = [n for n in desired_order if n in names_in_choice] + [
		n for n in names_in_choice if n not in desired_order
	]

	name_width = max((len(n) for n in ordered_names), default=0)
	cmd_lines = [
		f"  {name.ljust(name_width)}  {short_help_map.get(name, '')}".rstrip() for name in ordered_names
	]

	def format_detail_for(name: str) -> str:
		sp = choices[name]
		tokens = []
		option_entries = []
		for act in getattr(sp, "_actions", []):
			if isinstance(act, argparse._HelpAction):
				continue
			help_text = (act.help or "").strip()
			if act.option_strings:
				longs = [opt for opt in act.option_strings if opt.startswith("--")]
				label = longs[0] if longs else act.option_strings[0]
				tokens.append(f"[{label}]")
			else:
				label = f"<{act.metavar or act.dest}>"
				optional = act.nargs in ("?", "*")
				tokens.append(f"[{label}]" if optional else label)
			if help_text:
				option_entries.append((label, help_text))

		uniq_tokens = list(dict.fromkeys(tokens))
		lines = [f"  {name} " + " ".join(uniq_tokens) if uniq_tokens else f"  {name}"]
		if not option_entries:
			lines.append("    No options.")
		else:
			pad = max(len(label) for label, _ in option_entries)
			for label, help_text in option_entries:
				lines.append(f"    {label.ljust(pad)}  {help_text}")
		return "\n".join(lines)

	out_lines = ["Usage:\n  {} [COMMAND] [OPTIONS]".format(prog)]
	if desc:
		out_lines.append("\n{}".format(desc))
	out_lines.append("\nCommands:")
	out_lines.extend(cmd_lines)
	out_lines.append("\nDetailed Commands:")
	out_lines.extend(format_detail_for(n) for n in ordered_names)
	return "\n".join(out_lines) + "\n"
