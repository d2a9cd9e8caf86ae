use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use homlat::checks::{check_at_depth, CheckError, MAX_DEPTH};
use homlat::enumerate;
use homlat::format::{self, FormatError, Kind};
use homlat::lattice::FiniteLattice;
use homlat::monoid::FinMonoid;
use homlat::nsub::enumerate_nsub;
use homlat::report::{CheckReport, Property};
use homlat::scenarios::{self, Outcome, ScenarioConfig, StepStatus};
use homlat::semilattice::fixtures;
use homlat::zexact::{Cmon, ZContext};
use rand::rngs::StdRng;
use rand::SeedableRng;
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "homlat", version, about = "Kernels, cokernels and normal-subobject lattices of finite commutative monoids")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads (0 uses all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a table or cover file and echo its canonical form.
    Validate { input: String },
    /// List the normal subobjects of an object and classify their lattice.
    Nsub {
        input: String,
        /// Print the lattice in the cover file format instead.
        #[arg(long)]
        export: bool,
    },
    /// Run a property check on every object at the given ses depth.
    Check(CheckArgs),
    /// List all lattices up to a size bound.
    Enumerate(EnumerateArgs),
    /// Reproduce the worked examples end to end.
    PaperExamples {
        /// Depth for the scenarios that need short exact sequences.
        #[arg(long, default_value_t = 1)]
        ses_depth: usize,
        /// Swap the pentagon for a relabelled diamond (negative control).
        #[arg(long, hide = true)]
        corrupt_n5: bool,
    },
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, value_parser = parse_property)]
    property: Property,
    #[arg(long, default_value_t = 0)]
    ses_depth: usize,
    /// Largest depth accepted.
    #[arg(long, default_value_t = MAX_DEPTH)]
    max_depth: usize,
    /// Files or fixture names (N5, M3, L6, bool2, V4, chainN, ZN).
    #[arg(required = true)]
    inputs: Vec<String>,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    max_size: usize,
    #[arg(long, value_enum)]
    filter: Option<Filter>,
    /// Largest size accepted.
    #[arg(long, default_value_t = 8)]
    size_bound: usize,
    /// Keep a random sample of this many of the listed lattices.
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Filter {
    Nonmodular,
    Nondistributive,
}

fn parse_property(s: &str) -> Result<Property, String> {
    let p: Property = s.parse().map_err(|_| format!("unknown property {s:?}"))?;
    if Property::CLI.contains(&p) {
        Ok(p)
    } else {
        Err(format!("{s} is not available from the command line"))
    }
}

/// Exit statuses: all checks passed, some failed, bad input.
const PASS: u8 = 0;
const FAIL: u8 = 1;
const INPUT: u8 = 2;

struct Input {
    id: String,
    kind: Kind,
    monoid: FinMonoid,
}

fn load(arg: &str) -> Result<Input, Vec<String>> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| vec![format!("{arg}: {e}")])?;
        let parsed = format::parse(&text).map_err(|e| diagnostics(arg, &e))?;
        let id = path.file_stem().map_or(arg.to_string(), |s| s.to_string_lossy().into_owned());
        return Ok(Input {
            id,
            kind: parsed.kind,
            monoid: parsed.monoid,
        });
    }
    match fixtures::by_name(arg) {
        Some(monoid) => Ok(Input {
            id: arg.to_string(),
            kind: if monoid.is_semilattice() { Kind::Semilattice } else { Kind::Monoid },
            monoid,
        }),
        None => Err(vec![format!("{arg}: no such file or fixture")]),
    }
}

fn diagnostics(source: &str, e: &FormatError) -> Vec<String> {
    match e {
        FormatError::Syntax { line, message } => vec![format!("{source}:{line}: syntax: {message}")],
        FormatError::Invalid(errors) => errors
            .iter()
            .map(|l| format!("{source}:{}: {:?}: {}", l.line, l.error, l.error))
            .collect(),
        FormatError::Semilattice(l) => vec![format!("{source}:{}: {:?}: {}", l.line, l.error, l.error)],
        FormatError::Label(l) => vec![format!("{source}:{}: {:?}: {}", l.line, l.error, l.error)],
    }
}

fn input_error(lines: &[String]) -> u8 {
    for l in lines {
        eprintln!("error: {l}");
    }
    INPUT
}

fn load_commutative(arg: &str) -> Result<Input, u8> {
    let input = load(arg).map_err(|e| input_error(&e))?;
    if !input.monoid.is_commutative() {
        return Err(input_error(&[format!("{arg}: the monoid is not commutative")]));
    }
    Ok(input)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn validate(fmt: Format, arg: &str) -> u8 {
    let input = match load(arg) {
        Ok(i) => i,
        Err(e) => return input_error(&e),
    };
    let m = &input.monoid;
    match fmt {
        Format::Text => {
            println!(
                "# valid {} {}: {} elements, commutative: {}, semilattice: {}",
                input.kind,
                input.id,
                m.size(),
                yes_no(m.is_commutative()),
                yes_no(m.is_semilattice())
            );
            print!("{}", format::canonical(&format::Parsed { kind: input.kind, monoid: m.clone() }));
        }
        Format::Tsv => println!(
            "VALID\tobject={}\tkind={}\tsize={}\tcommutative={}\tsemilattice={}",
            input.id,
            input.kind,
            m.size(),
            m.is_commutative(),
            m.is_semilattice()
        ),
    }
    PASS
}

fn nsub(fmt: Format, arg: &str, export: bool) -> u8 {
    let input = match load_commutative(arg) {
        Ok(i) => i,
        Err(code) => return code,
    };
    let x = Arc::new(input.monoid);
    let lat = match enumerate_nsub(&Cmon, &x) {
        Ok(l) => l,
        Err(e) => return input_error(&[format!("{arg}: {e}")]),
    };
    if export {
        print!("{}", format::emit_lattice(&lat.lattice));
        return PASS;
    }
    let (modular, mw) = lattice_verdict(&lat.lattice, FiniteLattice::is_modular);
    let (distributive, dw) = lattice_verdict(&lat.lattice, FiniteLattice::is_distributive);
    match fmt {
        Format::Text => {
            println!("nsub({}) has {} elements", input.id, lat.len());
            for i in 0..lat.len() {
                println!("  {i:>2}  {:<8} {}", lat.name(i), Cmon.subobject_code(&lat.elements[i]));
            }
            for (a, b) in lat.lattice.covers() {
                println!("  {} < {}", lat.name(a), lat.name(b));
            }
            println!("modular: {}{}", yes_no(modular), mw.map(|w| format!(" ({w})")).unwrap_or_default());
            println!("distributive: {}{}", yes_no(distributive), dw.map(|w| format!(" ({w})")).unwrap_or_default());
        }
        Format::Tsv => {
            for i in 0..lat.len() {
                println!(
                    "NSUB\tobject={}\tindex={i}\tname={}\tcode={}",
                    input.id,
                    lat.name(i),
                    Cmon.subobject_code(&lat.elements[i])
                );
            }
            println!(
                "LATTICE\tobject={}\tsize={}\tmodular={modular}\tdistributive={distributive}",
                input.id,
                lat.len()
            );
        }
    }
    PASS
}

type Verdict = Result<(bool, Option<homlat::lattice::LatticeWitness>), homlat::lattice::LatticeError>;

fn lattice_verdict(lat: &FiniteLattice, f: fn(&FiniteLattice) -> Verdict) -> (bool, Option<String>) {
    match f(lat) {
        Ok((ok, w)) => (ok, w.map(|w| w.describe(lat))),
        Err(e) => (false, Some(e.to_string())),
    }
}

fn check(fmt: Format, args: &CheckArgs) -> u8 {
    if args.ses_depth > args.max_depth || args.ses_depth > MAX_DEPTH {
        return input_error(&[format!(
            "ses depth {} exceeds the limit {}",
            args.ses_depth,
            args.max_depth.min(MAX_DEPTH)
        )]);
    }
    let mut inputs = Vec::new();
    for arg in &args.inputs {
        match load_commutative(arg) {
            Ok(i) => inputs.push(i),
            Err(code) => return code,
        }
    }
    let results: Vec<Result<Vec<CheckReport>, CheckError>> = inputs
        .par_iter()
        .map(|i| check_at_depth(&i.id, &Arc::new(i.monoid.clone()), args.property, args.ses_depth))
        .collect();
    let mut status = PASS;
    let (mut objects, mut failing) = (0, 0);
    for (input, result) in inputs.iter().zip(results) {
        let reports = match result {
            Ok(r) => r,
            Err(e @ CheckError::Unsupported { .. }) => return input_error(&[format!("{}: {e}", input.id)]),
            Err(e) => {
                eprintln!("error: {}: {e}", input.id);
                status = FAIL;
                continue;
            }
        };
        for r in &reports {
            objects += 1;
            if !r.passed() {
                failing += 1;
                status = FAIL;
            }
            match fmt {
                Format::Text => println!("{}", r.text()),
                Format::Tsv => println!("{}", r.result_line()),
            }
        }
    }
    if fmt == Format::Text {
        println!("{} at depth {}: {failing} of {objects} objects fail", args.property, args.ses_depth);
    }
    status
}

struct Row {
    id: String,
    size: usize,
    modular: bool,
    distributive: bool,
    dpn: bool,
    diexact: bool,
    covers: Vec<(usize, usize)>,
}

fn classify(id: String, m: FinMonoid) -> Row {
    let lat = FiniteLattice::from_semilattice(&m);
    let m = Arc::new(m);
    let passes = |p| check_at_depth(&id, &m, p, 0).is_ok_and(|r| r.iter().all(CheckReport::passed));
    Row {
        size: m.size(),
        modular: lattice_verdict(&lat, FiniteLattice::is_modular).0,
        distributive: lattice_verdict(&lat, FiniteLattice::is_distributive).0,
        dpn: passes(Property::Dpn),
        diexact: passes(Property::DiExact),
        covers: lat.covers(),
        id,
    }
}

fn pass_fail(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "fail"
    }
}

fn enumerate_cmd(fmt: Format, args: &EnumerateArgs) -> u8 {
    if args.max_size == 0 || args.max_size > args.size_bound || args.max_size > 16 {
        return input_error(&[format!(
            "--max-size must be between 1 and {}",
            args.size_bound.min(16)
        )]);
    }
    let jobs: Vec<(String, Vec<u64>)> = (1..=args.max_size)
        .flat_map(|n| {
            enumerate::lattice_codes(n)
                .into_iter()
                .enumerate()
                .map(move |(k, c)| (format!("L{n}.{}", k + 1), c))
        })
        .collect();
    let rows: Vec<Row> = jobs
        .into_par_iter()
        .map(|(id, code)| classify(id, enumerate::code_to_semilattice(&code)))
        .collect();
    let mut listed: Vec<&Row> = rows
        .iter()
        .filter(|r| match args.filter {
            None => true,
            Some(Filter::Nonmodular) => !r.modular,
            Some(Filter::Nondistributive) => !r.distributive,
        })
        .collect();
    if let Some(k) = args.sample {
        let mut rng = StdRng::seed_from_u64(args.seed);
        let mut keep = rand::seq::index::sample(&mut rng, listed.len(), k.min(listed.len())).into_vec();
        keep.sort_unstable();
        listed = keep.into_iter().map(|i| listed[i]).collect();
    }
    for r in &listed {
        let covers: Vec<String> = r.covers.iter().map(|(a, b)| format!("{a}<{b}")).collect();
        match fmt {
            Format::Text => println!(
                "{}",
                format!(
                    "{:<7} modular={:<3} distributive={:<3} dpn={} diexact={}  {}",
                    r.id,
                    yes_no(r.modular),
                    yes_no(r.distributive),
                    pass_fail(r.dpn),
                    pass_fail(r.diexact),
                    covers.join(" ")
                )
                .trim_end()
            ),
            Format::Tsv => println!(
                "LATTICE\tid={}\tsize={}\tmodular={}\tdistributive={}\tdpn={}\tdiexact={}\tcovers={}",
                r.id,
                r.size,
                r.modular,
                r.distributive,
                pass_fail(r.dpn),
                pass_fail(r.diexact),
                covers.join(",")
            ),
        }
    }
    for n in 1..=args.max_size {
        let total = rows.iter().filter(|r| r.size == n).count();
        let shown = listed.iter().filter(|r| r.size == n).count();
        match fmt {
            Format::Text => println!("size {n}: {total} lattices, {shown} listed"),
            Format::Tsv => println!("COUNT\tsize={n}\ttotal={total}\tlisted={shown}"),
        }
    }
    PASS
}

fn paper_examples(fmt: Format, ses_depth: usize, corrupt_n5: bool) -> u8 {
    let results = scenarios::run_all(&ScenarioConfig { ses_depth, corrupt_n5 });
    let reproduced = results.iter().filter(|r| r.reproduced()).count();
    for r in &results {
        match fmt {
            Format::Text => println!("{r}"),
            Format::Tsv => {
                let (outcome, step) = match &r.outcome {
                    Outcome::Reproduced => ("reproduced", "-".to_string()),
                    Outcome::Mismatch { step, .. } => ("mismatch", step.clone()),
                    Outcome::Skipped(_) => ("skipped", "-".to_string()),
                };
                let ok = r.steps.iter().filter(|s| s.status == StepStatus::Ok).count();
                println!(
                    "SCENARIO\tname={}\toutcome={outcome}\tsteps={ok}/{}\tstep={step}",
                    r.name,
                    r.steps.len()
                );
            }
        }
    }
    match fmt {
        Format::Text => println!("{reproduced}/{} reproduced", results.len()),
        Format::Tsv => println!("SUMMARY\treproduced={reproduced}\ttotal={}", results.len()),
    }
    if reproduced == results.len() {
        PASS
    } else {
        FAIL
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global() {
            eprintln!("warning: {e}");
        }
    }
    let code = match &cli.command {
        Command::Validate { input } => validate(cli.format, input),
        Command::Nsub { input, export } => nsub(cli.format, input, *export),
        Command::Check(args) => check(cli.format, args),
        Command::Enumerate(args) => enumerate_cmd(cli.format, args),
        Command::PaperExamples { ses_depth, corrupt_n5 } => paper_examples(cli.format, *ses_depth, *corrupt_n5),
    };
    ExitCode::from(code)
}
