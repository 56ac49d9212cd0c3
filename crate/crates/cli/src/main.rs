use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use alcs_cli::costs::parse_costs;
use alcs_cli::ingest::{ingest_degenerate, ingest_plain, Format};
use alcs_cli::report::{InputString, Report, Status, Witness, REPORT_SCHEMA, SCHEMA_VERSION};
use alcs_core::gadgets::{
    build_rklcs_instance, build_rklcss_instance, even_sizes, planted_complete_kov_family,
    planted_mov_family, random_family, GadgetInstance,
};
use alcs_core::indeterminate::solve_rkt_lcs_indet;
use alcs_core::oracle::{
    brute_rk_lcss, brute_rkt_lcs, brute_rkt_lcs_indet, has_complete_k_ov, has_m_ov,
    has_m_ov_inclusive, OracleBudget,
};
use alcs_core::solver::{
    solve_rk_lcs_maxlcp, solve_rk_lcss, solve_rkt_lcs, solve_rkt_lcs_via_subsets, Outcome,
    SolveOptions, SubsetLimits,
};
use alcs_core::{AlcsError, Alphabet, DistanceMetric, IndeterminateString, StringSet};
use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

const EXIT_INPUT: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NO_SOLUTION: u8 = 3;

/// Restricted approximate longest common substring solvers.
#[derive(Parser)]
#[command(name = "alcs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem on a file of strings.
    Solve(SolveArgs),
    /// Write an orthogonal-vectors gadget instance plus a JSON sidecar.
    GenGadget(GadgetArgs),
    /// Print the JSON schema of `solve --output json`.
    Schema,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProblemArg {
    RkLcs,
    RktLcs,
    RkLcss,
    Elcs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MetricArg {
    Hamming,
    Edit,
    Weighted,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolverArg {
    Lengthstat,
    Maxlcp,
    Subsets,
    Oracle,
    /// Exact clique search, rk-lcss only.
    Clique,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Lines,
    Fasta,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputArg {
    Json,
    Tsv,
    Human,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "lines")]
    format: FormatArg,
    /// Read IUPAC codes and bracket groups such as [AT] as letter sets.
    #[arg(long)]
    indeterminate: bool,
    #[arg(long, value_enum, default_value = "rkt-lcs")]
    problem: ProblemArg,
    #[arg(long, value_enum, default_value = "hamming")]
    metric: MetricArg,
    /// Distance budget.
    #[arg(long, default_value_t = 0)]
    k: u32,
    /// Minimum number of supporting strings; defaults to all of them.
    #[arg(long)]
    t: Option<usize>,
    /// Defaults to lengthstat, or clique for rk-lcss.
    #[arg(long, value_enum)]
    solver: Option<SolverArg>,
    /// Cost table for the weighted metric.
    #[arg(long)]
    costs: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    output: OutputArg,
    /// Worker threads; 1 runs serially.
    #[arg(long)]
    threads: Option<usize>,
    /// Alphabet letters, e.g. acgt. Inferred from the input by default.
    #[arg(long)]
    alphabet: Option<String>,
    /// Keep FASTA letters as written instead of lowercasing them.
    #[arg(long)]
    no_normalize: bool,
    /// Caps for the oracle solver; override ALCS_ORACLE_* variables.
    #[arg(long)]
    oracle_max_len: Option<usize>,
    #[arg(long)]
    oracle_max_strings: Option<usize>,
    #[arg(long)]
    oracle_max_k: Option<u32>,
    /// Largest subset count the subsets solver may enumerate.
    #[arg(long)]
    max_subsets: Option<u128>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GadgetKindArg {
    Rklcs,
    Rklcss,
}

#[derive(Args)]
struct GadgetArgs {
    #[arg(value_enum)]
    kind: GadgetKindArg,
    /// Number of vector sets for rklcs.
    #[arg(long = "M", default_value_t = 2)]
    big_m: usize,
    /// Number of vector sets (and strings) for rklcss.
    #[arg(long = "m", default_value_t = 2)]
    m: usize,
    /// Vector dimension.
    #[arg(long)]
    d: usize,
    /// Vectors in total for rklcs, per set for rklcss.
    #[arg(long)]
    nv: usize,
    #[arg(long, default_value_t = 1)]
    q: usize,
    /// Plant an orthogonal choice.
    #[arg(long)]
    plant: bool,
    /// Probability of a 1 coordinate.
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Instance file; the sidecar goes to the same path plus `.json`.
    #[arg(long)]
    out: PathBuf,
}

enum Failure {
    Usage(String),
    Input(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

/// Core errors caused by the chosen flags rather than the data.
fn classify(e: AlcsError) -> Failure {
    match e {
        AlcsError::ThresholdOutOfRange { .. }
        | AlcsError::SubsetExplosion { .. }
        | AlcsError::BudgetExceeded(_)
        | AlcsError::UnsupportedMetric(_)
        | AlcsError::WrongMetric(_) => Failure::Usage(e.to_string()),
        other => Failure::Input(other.into()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => solve(&args),
        Command::GenGadget(args) => gen_gadget(&args).map(|()| ExitCode::SUCCESS),
        Command::Schema => {
            print!("{REPORT_SCHEMA}");
            Ok(ExitCode::SUCCESS)
        }
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

enum Data {
    Plain(StringSet),
    Degenerate(Vec<IndeterminateString>),
}

impl Data {
    fn len(&self) -> usize {
        match self {
            Data::Plain(s) => s.len(),
            Data::Degenerate(v) => v.len(),
        }
    }

    fn lengths(&self) -> Vec<usize> {
        match self {
            Data::Plain(s) => s.iter().map(<[u8]>::len).collect(),
            Data::Degenerate(v) => v.iter().map(IndeterminateString::len).collect(),
        }
    }

    /// Text of `string[start..end]`, 0-based half-open.
    fn slice(&self, string: usize, start: usize, end: usize) -> String {
        match self {
            Data::Plain(s) => String::from_utf8_lossy(&s.get(string)[start..end]).into_owned(),
            Data::Degenerate(v) => v[string].positions()[start..end]
                .iter()
                .map(ToString::to_string)
                .collect(),
        }
    }
}

fn metric_name(m: MetricArg) -> &'static str {
    match m {
        MetricArg::Hamming => "hamming",
        MetricArg::Edit => "edit",
        MetricArg::Weighted => "weighted",
    }
}

fn solver_name(s: SolverArg) -> &'static str {
    match s {
        SolverArg::Lengthstat => "lengthstat",
        SolverArg::Maxlcp => "maxlcp",
        SolverArg::Subsets => "subsets",
        SolverArg::Oracle => "oracle",
        SolverArg::Clique => "clique",
    }
}

fn problem_name(p: ProblemArg) -> &'static str {
    match p {
        ProblemArg::RkLcs => "rk-lcs",
        ProblemArg::RktLcs => "rkt-lcs",
        ProblemArg::RkLcss => "rk-lcss",
        ProblemArg::Elcs => "elcs",
    }
}

fn oracle_budget(args: &SolveArgs) -> OracleBudget {
    let mut b = OracleBudget::from_env();
    if let Some(v) = args.oracle_max_len {
        b.max_len = v;
    }
    if let Some(v) = args.oracle_max_strings {
        b.max_strings = v;
    }
    if let Some(v) = args.oracle_max_k {
        b.max_k = v;
    }
    b
}

fn solve(args: &SolveArgs) -> Result<ExitCode, Failure> {
    let problem = args.problem;
    let solver = args.solver.unwrap_or(if problem == ProblemArg::RkLcss {
        SolverArg::Clique
    } else {
        SolverArg::Lengthstat
    });
    let degenerate = args.indeterminate || problem == ProblemArg::Elcs;

    // Flag combinations that do not depend on the input.
    if args.metric == MetricArg::Weighted && args.costs.is_none() {
        return usage("--metric weighted requires --costs");
    }
    if args.metric != MetricArg::Weighted && args.costs.is_some() {
        return usage("--costs only applies to --metric weighted");
    }
    if degenerate && args.metric != MetricArg::Hamming {
        return usage("indeterminate strings support only --metric hamming");
    }
    if degenerate && args.alphabet.is_some() {
        return usage("--alphabet cannot be combined with indeterminate input, which is always ACGT");
    }
    if problem == ProblemArg::Elcs && args.k != 0 {
        return usage("elcs is the exact problem; --k must be 0");
    }
    match (problem, solver) {
        (ProblemArg::RkLcss, SolverArg::Clique | SolverArg::Oracle) => {}
        (ProblemArg::RkLcss, _) => return usage("rk-lcss supports --solver clique or oracle"),
        (_, SolverArg::Clique) => return usage("--solver clique applies only to rk-lcss"),
        (_, SolverArg::Lengthstat | SolverArg::Oracle) => {}
        (_, SolverArg::Maxlcp | SolverArg::Subsets) if degenerate => {
            return usage("indeterminate input supports --solver lengthstat or oracle")
        }
        _ => {}
    }
    if problem == ProblemArg::RkLcss && solver == SolverArg::Oracle && args.metric != MetricArg::Hamming {
        return usage("the rk-lcss oracle supports only --metric hamming");
    }
    if args.threads == Some(0) {
        return usage("--threads must be at least 1");
    }
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(format!("cannot configure {n} threads: {e}")))?;
    }
    let opts = SolveOptions {
        parallel: args.threads != Some(1),
    };

    let text = std::fs::read_to_string(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let format = match args.format {
        FormatArg::Lines => Format::Lines,
        FormatArg::Fasta => Format::Fasta,
    };
    let (names, data) = if degenerate {
        let (names, strings) = ingest_degenerate(&text, format).context("parsing input")?;
        (names, Data::Degenerate(strings))
    } else {
        let alphabet = args
            .alphabet
            .as_deref()
            .map(|a| Alphabet::new(a.as_bytes()))
            .transpose()
            .map_err(|e| Failure::Usage(format!("--alphabet: {e}")))?;
        let (names, set) = ingest_plain(&text, format, alphabet.as_ref(), !args.no_normalize)
            .context("parsing input")?;
        (names, Data::Plain(set))
    };
    let m = data.len();
    if m < 2 {
        return Err(Failure::Input(anyhow::anyhow!("need at least two strings, found {m}")));
    }
    let t = match (problem, args.t) {
        (ProblemArg::RktLcs, t) => t.unwrap_or(m),
        (_, None) => m,
        (_, Some(t)) if t == m => t,
        (p, Some(_)) => return usage(format!("--t does not apply to {}; it is always m = {m}", problem_name(p))),
    };
    if !(1..=m).contains(&t) {
        return usage(format!("--t must be in 1..={m}"));
    }
    if solver == SolverArg::Maxlcp && t != m {
        return usage("--solver maxlcp solves only t = m");
    }

    let metric = match args.metric {
        MetricArg::Hamming => DistanceMetric::Hamming,
        MetricArg::Edit => DistanceMetric::Edit,
        MetricArg::Weighted => {
            let path = args.costs.as_ref().expect("checked above");
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            DistanceMetric::weighted(
                parse_costs(&text).with_context(|| format!("parsing {}", path.display()))?,
            )
        }
    };
    let k = args.k;

    let start = Instant::now();
    let outcome = match &data {
        Data::Plain(set) => match (problem, solver) {
            (ProblemArg::RkLcss, SolverArg::Oracle) => brute_rk_lcss(set, k, &oracle_budget(args)),
            (ProblemArg::RkLcss, _) => solve_rk_lcss(set, k, &metric),
            (_, SolverArg::Maxlcp) => solve_rk_lcs_maxlcp(set, k, &metric, opts),
            (_, SolverArg::Subsets) => {
                let mut limits = SubsetLimits::default();
                if let Some(n) = args.max_subsets {
                    limits.max_subsets = n;
                    limits.max_strings = usize::MAX;
                }
                solve_rkt_lcs_via_subsets(set, k, t, &metric, limits, opts)
            }
            (_, SolverArg::Oracle) => brute_rkt_lcs(set, k, t, &metric, &oracle_budget(args)),
            _ => solve_rkt_lcs(set, k, t, &metric, opts),
        },
        Data::Degenerate(strings) => match solver {
            SolverArg::Oracle => brute_rkt_lcs_indet(strings, k, t, &oracle_budget(args)),
            _ => solve_rkt_lcs_indet(strings, &Alphabet::dna(), k, t, opts),
        },
    }
    .map_err(classify)?;
    let wall = start.elapsed();

    let lengths = data.lengths();
    let mut report = Report {
        schema_version: SCHEMA_VERSION,
        status: Status::NoSolution,
        problem: problem_name(problem).into(),
        metric: metric_name(args.metric).into(),
        solver: solver_name(solver).into(),
        k,
        t,
        m,
        indeterminate: degenerate,
        length: 0,
        answer: None,
        source_index_1based: None,
        source_offset_1based: None,
        maximizers: 0,
        witnesses: Vec::new(),
        strings: names
            .iter()
            .zip(&lengths)
            .map(|(name, &length)| InputString {
                name: name.clone(),
                length,
            })
            .collect(),
        wall_time_ms: wall.as_secs_f64() * 1e3,
    };
    if let Outcome::Found(sol) = &outcome {
        report.status = Status::Found;
        report.length = sol.length;
        report.answer = Some(String::from_utf8_lossy(&sol.answer).into_owned());
        report.source_index_1based = sol.source.map(|(i, _)| i + 1);
        report.source_offset_1based = sol.source.map(|(_, p)| p + 1);
        report.maximizers = sol.maximizers;
        report.witnesses = sol
            .witnesses
            .iter()
            .map(|w| Witness {
                string_index_1based: w.string + 1,
                name: names[w.string].clone(),
                start_1based: w.start + 1,
                end_1based: w.end,
                distance: w.distance,
                occurrence: data.slice(w.string, w.start, w.end),
                empty: w.is_empty(),
            })
            .collect();
    }
    print!(
        "{}",
        match args.output {
            OutputArg::Json => report.to_json() + "\n",
            OutputArg::Tsv => report.to_tsv(),
            OutputArg::Human => report.to_human(),
        }
    );
    Ok(match outcome {
        Outcome::Found(_) => ExitCode::SUCCESS,
        Outcome::NoSolution => ExitCode::from(EXIT_NO_SOLUTION),
    })
}

/// Generator caps, so a typo cannot ask for gigabytes.
const MAX_D: usize = 4096;
const MAX_NV: usize = 100_000;
const MAX_SETS: usize = 64;
const MAX_TOTAL_LEN: usize = 200_000_000;

fn gen_gadget(args: &GadgetArgs) -> Result<(), Failure> {
    if !(1..=MAX_D).contains(&args.d) {
        return usage(format!("--d must be in 1..={MAX_D}"));
    }
    if !(1..=MAX_NV).contains(&args.nv) {
        return usage(format!("--nv must be in 1..={MAX_NV}"));
    }
    if args.q == 0 {
        return usage("--q must be at least 1");
    }
    if !(0.0..=1.0).contains(&args.density) {
        return usage("--density must be in [0, 1]");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let (inst, sets, sidecar_extra) = match args.kind {
        GadgetKindArg::Rklcs => {
            if !(2..=MAX_SETS).contains(&args.big_m) {
                return usage(format!("--M must be in 2..={MAX_SETS}"));
            }
            let sizes = even_sizes(args.nv, args.big_m).map_err(|e| Failure::Usage(e.to_string()))?;
            // Each image is 7d letters and is followed by a 7dq wall.
            let est = 7 * args.d * (args.q + 1) * args.nv * 2;
            if est > MAX_TOTAL_LEN {
                return usage(format!("instance would have about {est} letters"));
            }
            let fam = if args.plant {
                planted_mov_family(&mut rng, &sizes, args.d, args.density)
            } else {
                random_family(&mut rng, &sizes, args.d, args.density)
            };
            let inst = build_rklcs_instance(&fam, args.q).map_err(classify)?;
            let extra = json!({
                "has_m_ov": has_m_ov(&fam).map_err(classify)?.is_some(),
                "has_m_ov_own_set": has_m_ov_inclusive(&fam).map_err(classify)?.is_some(),
            });
            (inst, args.big_m, extra)
        }
        GadgetKindArg::Rklcss => {
            if !(2..=MAX_SETS).contains(&args.m) {
                return usage(format!("--m must be in 2..={MAX_SETS}"));
            }
            let est = (2 * args.m + 7) * args.d * (args.q + 2) * args.nv * args.m * 2;
            if est > MAX_TOTAL_LEN {
                return usage(format!("instance would have about {est} letters"));
            }
            let fam = if args.plant {
                planted_complete_kov_family(&mut rng, args.m, args.nv, args.d, args.density)
            } else {
                random_family(&mut rng, &vec![args.nv; args.m], args.d, args.density)
            };
            let inst = build_rklcss_instance(&fam, args.q).map_err(classify)?;
            // The pairwise check is exponential in m; skip it when large.
            let search = args.nv.checked_pow(args.m as u32).filter(|&n| n <= 10_000_000);
            let extra = match search {
                Some(_) => json!({
                    "has_complete_k_ov": has_complete_k_ov(&fam).map_err(classify)?.is_some(),
                }),
                None => json!({ "has_complete_k_ov": null }),
            };
            (inst, args.m, extra)
        }
    };
    write_instance(args, &inst, sets, sidecar_extra)?;
    Ok(())
}

fn write_instance(
    args: &GadgetArgs,
    inst: &GadgetInstance,
    sets: usize,
    extra: serde_json::Value,
) -> Result<(), Failure> {
    std::fs::write(&args.out, inst.to_lines())
        .with_context(|| format!("writing {}", args.out.display()))?;
    let mut sidecar = json!({
        "schema_version": SCHEMA_VERSION,
        "kind": match args.kind {
            GadgetKindArg::Rklcs => "rklcs",
            GadgetKindArg::Rklcss => "rklcss",
        },
        "instance": args.out.file_name().map(|n| n.to_string_lossy().into_owned()),
        "strings": inst.strings.len(),
        "total_length": inst.total_len(),
        "k": inst.k,
        "sets": sets,
        "d": inst.d,
        "nv": args.nv,
        "set_sizes": inst.set_sizes,
        "q": inst.q,
        "threshold": inst.lower,
        "lower": inst.lower,
        "upper": inst.upper,
        "planted": args.plant,
        "seed": args.seed,
        "density": args.density,
    });
    if let (Some(obj), serde_json::Value::Object(more)) = (sidecar.as_object_mut(), extra) {
        obj.extend(more);
    }
    let mut path = args.out.clone().into_os_string();
    path.push(".json");
    let path = PathBuf::from(path);
    std::fs::write(&path, serde_json::to_string_pretty(&sidecar).expect("sidecar serializes") + "\n")
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
