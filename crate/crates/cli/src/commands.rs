//! Argument parsing and subcommand dispatch.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use distmatch::approx::{approximate, ApproxError};
use distmatch::exact::{integrality_gap, solve_bruteforce, solve_double_matching_bruteforce, ExactError};
use distmatch::gen::{
    gen_from_3dm, gen_from_hampath, gen_random, gen_tight_gap, random_two_regular_3dm, GenError,
    RandomParams,
};
use distmatch::netflow::{max_weight_b_matching, FlowError};
use distmatch::permute::{
    best_permutation_bruteforce, derandomized_permutation, expected_weight_enumeration,
    optimal_permutation_distance_matching, randomized_permutation, relaxation, t_greedy_permutation,
    Algorithm, BoundCertificate, PermutationResult, PermuteError,
};
use distmatch::{check_feasible, Bound, Instance, Matching, Rational};
use serde_json::{json, Map, Value};

use crate::format::{
    digest, parse_rational, rational_parts, read_json, DoubleMatchingFile, GraphFile, InstanceFile,
    ThreeDimFile,
};
use crate::report::{Format, Report};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "distmatch", version, about = "Distance-constrained b-matching workbench")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format (default: csv for bench, json otherwise).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Add wall-clock timings to reports (makes output run-dependent).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an instance file.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Solve an instance.
    Solve {
        #[arg(long, value_enum)]
        method: SolveMethod,
        instance: PathBuf,
    },
    /// LP optimum, integer optimum and their ratio.
    Gap { instance: PathBuf },
    /// Choose an order of the left class together with a matching.
    Permute {
        #[arg(long, value_enum)]
        method: PermuteMethod,
        /// Honour finite right bounds in the optimal ordering.
        #[arg(long)]
        respect_bt: bool,
        instance: PathBuf,
    },
    /// Exact expected weight of a randomized ordering algorithm (n ≤ 8).
    Expect {
        #[arg(long, value_enum)]
        alg: ExpectAlg,
        instance: PathBuf,
    },
    /// Sweep seeded random instances through several methods.
    Bench(BenchArgs),
    /// Re-validate a solution file against its instance.
    Check { instance: PathBuf, solution: PathBuf },
    /// Maximum double matching of a double matching file.
    DoubleMatching { input: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// Complete star on 2d−1 left nodes, cyclic, unit weights.
    TightGap {
        #[arg(long)]
        d: usize,
    },
    /// Seeded random instance.
    Random(RandomArgs),
    /// Random 2-regular 3-dimensional matching instance with m elements per class.
    ThreeDm {
        #[arg(long)]
        m: usize,
    },
    /// Double matching instance of the 3-dimensional matching reduction.
    #[command(name = "from-3dm")]
    From3dm {
        #[arg(long)]
        input: PathBuf,
    },
    /// Ordering instance (d = 2) of the Hamiltonian path reduction.
    Hampath {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Debug, Clone, Args)]
pub struct RandomArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub t: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub cyclic: bool,
    #[arg(long, default_value_t = 0.5)]
    pub edge_prob: f64,
    #[arg(long, default_value_t = 1)]
    pub w_min: i64,
    #[arg(long, default_value_t = 10)]
    pub w_max: i64,
    #[arg(long, default_value_t = 1)]
    pub w_den: i64,
    #[arg(long, default_value_t = 1)]
    pub bs_min: u32,
    #[arg(long, default_value_t = 1)]
    pub bs_max: u32,
    /// Right bounds are drawn from [bt-min, bt-max]; unbounded when omitted.
    #[arg(long)]
    pub bt_min: Option<u32>,
    #[arg(long)]
    pub bt_max: Option<u32>,
}

impl RandomArgs {
    fn params(&self) -> Result<RandomParams, CliError> {
        let b_t_range = match (self.bt_min, self.bt_max) {
            (None, None) => None,
            (Some(lo), Some(hi)) => Some((lo, hi)),
            _ => return Err(CliError::BadInput("give both --bt-min and --bt-max".into())),
        };
        Ok(RandomParams {
            n: self.n,
            t_count: self.t,
            d: self.d,
            cyclic: self.cyclic,
            edge_prob: self.edge_prob,
            weight_range: (self.w_min, self.w_max),
            weight_den: self.w_den,
            b_s_range: (self.bs_min, self.bs_max),
            b_t_range,
        })
    }
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 10)]
    pub count: u64,
    /// Comma-separated methods: brute, approx, bmatching, gap, optimal,
    /// rand, derand, tgreedy, bestperm.
    #[arg(long, default_value = "brute,approx")]
    pub methods: String,
    #[command(flatten)]
    pub random: RandomArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolveMethod {
    Brute,
    Approx,
    Bmatching,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PermuteMethod {
    Optimal,
    Rand,
    Derand,
    Tgreedy,
    Brute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExpectAlg {
    Alg1,
    Alg2,
    Tgreedy,
}

impl From<ApproxError> for CliError {
    fn from(e: ApproxError) -> Self {
        match e {
            ApproxError::Flow(f) => f.into(),
            ApproxError::PreconditionViolated(msg) => CliError::Precondition(msg.into()),
            other => CliError::Precondition(other.to_string()),
        }
    }
}

impl From<FlowError> for CliError {
    fn from(e: FlowError) -> Self {
        CliError::BadInput(e.to_string())
    }
}

impl From<ExactError> for CliError {
    fn from(e: ExactError) -> Self {
        CliError::BadInput(e.to_string())
    }
}

impl From<PermuteError> for CliError {
    fn from(e: PermuteError) -> Self {
        match e {
            PermuteError::PreconditionViolated(msg) => CliError::Precondition(msg.into()),
            other => CliError::BadInput(other.to_string()),
        }
    }
}

impl From<GenError> for CliError {
    fn from(e: GenError) -> Self {
        CliError::BadInput(e.to_string())
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::BadInput(e.to_string()))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| CliError::BadInput(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance, CliError> {
    read_json::<InstanceFile>(&read_text(path)?, "instance")?.to_instance()
}

fn put_rational(m: &mut Map<String, Value>, prefix: &str, x: Option<&Rational>) {
    let (num, den) = x.map_or((Value::Null, Value::Null), rational_parts);
    m.insert(format!("{prefix}_num"), num);
    m.insert(format!("{prefix}_den"), den);
}

fn one_based(ids: &[usize]) -> Value {
    Value::from(ids.iter().map(|&i| i + 1).collect::<Vec<_>>())
}

struct Timer {
    start: Instant,
    enabled: bool,
}

impl Timer {
    fn start(enabled: bool) -> Self {
        Timer { start: Instant::now(), enabled }
    }

    fn stamp(&self, m: &mut Map<String, Value>) {
        if self.enabled {
            m.insert("time_ms".into(), json!(self.start.elapsed().as_secs_f64() * 1e3));
        }
    }
}

struct Solved {
    matching: Matching,
    value: Rational,
    guarantee: Option<Rational>,
}

fn solve_with(inst: &Instance, method: SolveMethod) -> Result<Solved, CliError> {
    Ok(match method {
        SolveMethod::Brute => {
            let m = solve_bruteforce(inst)?;
            let value = m.weight(inst);
            Solved { matching: m, value, guarantee: Some(Rational::from_integer(1.into())) }
        }
        SolveMethod::Approx => {
            let res = approximate(inst)?;
            Solved { matching: res.matching, value: res.weight, guarantee: Some(res.guarantee) }
        }
        SolveMethod::Bmatching => {
            let caps: Vec<Bound> = inst.b_s().iter().map(|&b| Bound::Finite(b)).collect();
            let res = max_weight_b_matching(inst, &caps, inst.b_t())?;
            let m = Matching::from_edges(inst, res.edge_ids).expect("valid edge ids");
            Solved { matching: m, value: res.total_weight, guarantee: None }
        }
    })
}

fn method_name(m: impl ValueEnum) -> String {
    m.to_possible_value().expect("named").get_name().to_string()
}

fn cmd_solve(cli: &Cli, method: SolveMethod, path: &Path, echo: &str) -> Result<Report, CliError> {
    let inst = load_instance(path)?;
    let timer = Timer::start(cli.timing);
    let solved = solve_with(&inst, method)?;
    let mut m = Map::new();
    m.insert("command".into(), echo.into());
    m.insert("digest".into(), digest(&inst).into());
    m.insert("method".into(), method_name(method).into());
    m.insert("seed".into(), cli.seed.into());
    put_rational(&mut m, "value", Some(&solved.value));
    put_rational(&mut m, "guarantee", solved.guarantee.as_ref());
    m.insert("edges".into(), one_based(solved.matching.edge_ids()));
    m.insert("feasible".into(), check_feasible(&inst, &solved.matching).is_feasible().into());
    timer.stamp(&mut m);
    Ok(Report::Record(m))
}

fn cmd_gap(cli: &Cli, path: &Path) -> Result<Report, CliError> {
    let inst = load_instance(path)?;
    let timer = Timer::start(cli.timing);
    let g = integrality_gap(&inst)?;
    let mut m = Map::new();
    put_rational(&mut m, "lp", Some(&g.lp_opt));
    put_rational(&mut m, "ip", Some(&g.ip_opt));
    put_rational(&mut m, "gap", Some(&g.gap));
    timer.stamp(&mut m);
    Ok(Report::Record(m))
}

fn permute_with(
    inst: &Instance,
    method: PermuteMethod,
    respect_bt: bool,
    seed: u64,
) -> Result<PermutationResult, CliError> {
    Ok(match method {
        PermuteMethod::Optimal => optimal_permutation_distance_matching(inst, respect_bt)?,
        PermuteMethod::Rand => randomized_permutation(inst, seed)?,
        PermuteMethod::Derand => derandomized_permutation(inst)?,
        PermuteMethod::Tgreedy => t_greedy_permutation(inst, seed)?,
        PermuteMethod::Brute => best_permutation_bruteforce(inst)?,
    })
}

fn permutation_record(res: &PermutationResult) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("order".into(), one_based(&res.order));
    m.insert("edges".into(), one_based(res.matching.edge_ids()));
    put_rational(&mut m, "value", Some(&res.value));
    m.insert("method".into(), res.method.name().into());
    m.insert("seed".into(), res.seed.map_or(Value::Null, Value::from));
    let bound = res.bound.as_ref().map(BoundCertificate::factor);
    put_rational(&mut m, "bound", bound.as_ref());
    m
}

fn cmd_permute(cli: &Cli, method: PermuteMethod, respect_bt: bool, path: &Path) -> Result<Report, CliError> {
    let inst = load_instance(path)?;
    let timer = Timer::start(cli.timing);
    let res = permute_with(&inst, method, respect_bt, cli.seed)?;
    let mut m = permutation_record(&res);
    timer.stamp(&mut m);
    Ok(Report::Record(m))
}

fn cmd_expect(cli: &Cli, alg: ExpectAlg, path: &Path) -> Result<Report, CliError> {
    let inst = load_instance(path)?;
    let timer = Timer::start(cli.timing);
    let which = match alg {
        ExpectAlg::Alg1 => Algorithm::Alg1,
        ExpectAlg::Alg2 => Algorithm::Alg2,
        ExpectAlg::Tgreedy => Algorithm::TGreedy,
    };
    let e = expected_weight_enumeration(&inst, which)?;
    let (_, relaxed, _) = relaxation(&inst)?;
    let mut m = Map::new();
    m.insert("alg".into(), method_name(alg).into());
    put_rational(&mut m, "expectation", Some(&e));
    put_rational(&mut m, "relaxation", Some(&relaxed));
    timer.stamp(&mut m);
    Ok(Report::Record(m))
}

fn cmd_gen(cli: &Cli, what: &GenCommand) -> Result<Report, CliError> {
    let to_value = |v: &dyn erased::Ser| v.value();
    Ok(Report::File(match what {
        GenCommand::TightGap { d } => to_value(&InstanceFile::from_instance(&gen_tight_gap(*d)?)),
        GenCommand::Random(args) => {
            to_value(&InstanceFile::from_instance(&gen_random(&args.params()?, cli.seed)?))
        }
        GenCommand::ThreeDm { m } => {
            to_value(&ThreeDimFile::from_hypergraph(&random_two_regular_3dm(*m, cli.seed)?))
        }
        GenCommand::From3dm { input } => {
            let h = read_json::<ThreeDimFile>(&read_text(input)?, "3DM instance")?.to_hypergraph()?;
            to_value(&DoubleMatchingFile::from_instance(&gen_from_3dm(&h)?))
        }
        GenCommand::Hampath { input } => {
            let g = read_json::<GraphFile>(&read_text(input)?, "graph")?.to_graph()?;
            let (inst, profile) = gen_from_hampath(&g)?;
            let mut file = InstanceFile::from_instance(&inst);
            file.b_profile = Some(profile);
            to_value(&file)
        }
    }))
}

mod erased {
    pub trait Ser {
        fn value(&self) -> serde_json::Value;
    }

    impl<T: serde::Serialize> Ser for T {
        fn value(&self) -> serde_json::Value {
            serde_json::to_value(self).expect("serializable")
        }
    }
}

fn cmd_double_matching(cli: &Cli, input: &Path) -> Result<Report, CliError> {
    let file = read_json::<DoubleMatchingFile>(&read_text(input)?, "double matching instance")?;
    let zero = |v: &[usize]| -> Result<Vec<usize>, CliError> {
        v.iter()
            .map(|&i| i.checked_sub(1).ok_or_else(|| CliError::BadInput("indices are 1-based".into())))
            .collect()
    };
    let mut in_s1 = vec![false; file.s_count];
    let mut in_s2 = vec![false; file.s_count];
    for s in zero(&file.s1)? {
        *in_s1.get_mut(s).ok_or_else(|| CliError::BadInput("s1 member out of range".into()))? = true;
    }
    for s in zero(&file.s2)? {
        *in_s2.get_mut(s).ok_or_else(|| CliError::BadInput("s2 member out of range".into()))? = true;
    }
    let mut edges = Vec::with_capacity(file.edges.len());
    for &[s, t] in &file.edges {
        let v = zero(&[s, t])?;
        edges.push((v[0], v[1]));
    }
    let dm = distmatch::exact::DoubleMatchingInstance::new(file.s_count, file.t_count, in_s1, in_s2, edges)?;
    let timer = Timer::start(cli.timing);
    let best = solve_double_matching_bruteforce(&dm)?;
    let mut m = Map::new();
    m.insert("size".into(), best.len().into());
    m.insert("edges".into(), one_based(&best));
    timer.stamp(&mut m);
    Ok(Report::Record(m))
}

fn cmd_check(instance: &Path, solution: &Path) -> Result<Report, CliError> {
    let inst = load_instance(instance)?;
    let sol: Value = read_json(&read_text(solution)?, "solution")?;
    let ids = |key: &str| -> Result<Option<Vec<usize>>, CliError> {
        match sol.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| match v.as_u64() {
                    Some(i) if i >= 1 => Ok(i as usize - 1),
                    _ => Err(CliError::BadInput(format!("bad entry in {key}: {v}"))),
                })
                .collect::<Result<Vec<_>, _>>()
                .map(Some),
            Some(other) => Err(CliError::BadInput(format!("{key} must be an array, got {other}"))),
        }
    };
    let edges = ids("edges")?.ok_or_else(|| CliError::BadInput("solution has no edges".into()))?;
    let matching = Matching::from_edges(&inst, edges).map_err(|e| CliError::BadInput(e.to_string()))?;
    let checked = match ids("order")? {
        Some(order) => inst.permuted(&order).map_err(|e| CliError::BadInput(e.to_string()))?,
        None => inst.clone(),
    };
    let report = check_feasible(&checked, &matching);
    let value = matching.weight(&inst);
    let claimed = match (sol.get("value_num"), sol.get("value_den")) {
        (Some(n), Some(d)) => Some(parse_rational(n, d)?),
        _ => None,
    };
    let mut m = Map::new();
    m.insert("feasible".into(), report.is_feasible().into());
    m.insert("violations".into(), report.violations.len().into());
    put_rational(&mut m, "value", Some(&value));
    m.insert("value_matches".into(), claimed.map_or(Value::Null, |c| Value::from(c == value)));
    Ok(Report::Record(m))
}

const BENCH_METHODS: [&str; 9] =
    ["brute", "approx", "bmatching", "gap", "optimal", "rand", "derand", "tgreedy", "bestperm"];

fn bench_row(inst: &Instance, method: &str, seed: u64) -> Result<(Rational, Option<Rational>), CliError> {
    let perm = |m: PermuteMethod| -> Result<(Rational, Option<Rational>), CliError> {
        let res = permute_with(inst, m, false, seed)?;
        Ok((res.value, res.bound.as_ref().map(BoundCertificate::factor)))
    };
    match method {
        "brute" => solve_with(inst, SolveMethod::Brute).map(|s| (s.value, s.guarantee)),
        "approx" => solve_with(inst, SolveMethod::Approx).map(|s| (s.value, s.guarantee)),
        "bmatching" => solve_with(inst, SolveMethod::Bmatching).map(|s| (s.value, s.guarantee)),
        "gap" => integrality_gap(inst).map(|g| (g.gap, None)).map_err(Into::into),
        "optimal" => perm(PermuteMethod::Optimal),
        "rand" => perm(PermuteMethod::Rand),
        "derand" => perm(PermuteMethod::Derand),
        "tgreedy" => perm(PermuteMethod::Tgreedy),
        "bestperm" => perm(PermuteMethod::Brute),
        other => Err(CliError::BadInput(format!("unknown method {other}"))),
    }
}

fn cmd_bench(cli: &Cli, args: &BenchArgs) -> Result<Report, CliError> {
    let methods: Vec<&str> = args.methods.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if let Some(bad) = methods.iter().find(|m| !BENCH_METHODS.contains(m)) {
        return Err(CliError::BadInput(format!("unknown method {bad}")));
    }
    let params = args.random.params()?;
    let mut rows: Vec<(String, usize, Map<String, Value>)> = Vec::new();
    for i in 0..args.count {
        let seed = cli.seed.wrapping_add(i);
        let inst = gen_random(&params, seed)?;
        let dig = digest(&inst);
        for (rank, &method) in methods.iter().enumerate() {
            let timer = Timer::start(cli.timing);
            let outcome = bench_row(&inst, method, seed);
            let mut m = Map::new();
            m.insert("digest".into(), dig.clone().into());
            m.insert("seed".into(), seed.into());
            m.insert("method".into(), method.into());
            let fmt = |x: &Rational| Value::from(x.to_string());
            match outcome {
                Ok((value, bound)) => {
                    m.insert("value".into(), fmt(&value));
                    m.insert("bound".into(), bound.as_ref().map_or(Value::Null, fmt));
                    m.insert("status".into(), "ok".into());
                }
                Err(e) => {
                    m.insert("value".into(), Value::Null);
                    m.insert("bound".into(), Value::Null);
                    m.insert("status".into(), e.to_string().into());
                }
            }
            timer.stamp(&mut m);
            rows.push((dig.clone(), rank, m));
        }
    }
    rows.sort_by(|a, b| (&a.0, a.1).cmp(&(&b.0, b.1)));
    Ok(Report::Table(rows.into_iter().map(|(_, _, m)| m).collect()))
}

/// Runs a parsed command line; `echo` is the argument list as typed.
/// Returns the rendered output (already written to `--out` if given).
pub fn run(cli: &Cli, echo: &str) -> Result<String, CliError> {
    let report = match &cli.command {
        Command::Gen(what) => cmd_gen(cli, what)?,
        Command::Solve { method, instance } => cmd_solve(cli, *method, instance, echo)?,
        Command::Gap { instance } => cmd_gap(cli, instance)?,
        Command::Permute { method, respect_bt, instance } => cmd_permute(cli, *method, *respect_bt, instance)?,
        Command::Expect { alg, instance } => cmd_expect(cli, *alg, instance)?,
        Command::Bench(args) => cmd_bench(cli, args)?,
        Command::Check { instance, solution } => cmd_check(instance, solution)?,
        Command::DoubleMatching { input } => cmd_double_matching(cli, input)?,
    };
    let default = if matches!(cli.command, Command::Bench(_)) { Format::Csv } else { Format::Json };
    let text = report.render(cli.format.unwrap_or(default))?;
    if let Some(path) = &cli.out {
        std::fs::write(path, &text).map_err(|e| CliError::BadInput(format!("{}: {e}", path.display())))?;
    }
    Ok(text)
}
