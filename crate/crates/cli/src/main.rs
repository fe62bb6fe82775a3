//! Command-line front end: parse code files, run constructions and analyses,
//! emit human-readable and machine-readable reports.
//!
//! Exit codes: 0 success, 2 usage, 3 validation, 4 budget exceeded,
//! 5 construction failure.

mod codefile;
mod report;

use clap::{Parser, Subcommand, ValueEnum};
use codefile::{CodeFile, Kind, Role};
use report::{render_witness, Report};
use std::path::PathBuf;
use std::process::ExitCode;
use zprcodes::block::{r_optimal_parameters, standard_form, BlockCode};
use zprcodes::conv::{bound_b, decompose, BoundSet, ConvCode, ConvError};
use zprcodes::lift::{construct_mdp, LiftError, SearchStrategy};

const DEFAULT_BUDGET: u128 = 100_000_000;
const DEFAULT_CAP: u64 = 1_000_000;

#[derive(Parser)]
#[command(
    name = "zprcodes",
    version,
    about = "Exact analysis and construction of block and convolutional codes over Z_{p^r}"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for distance searches (env ZPRCODES_WORKERS)
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Append a machine-readable key=value block to reports
    #[arg(long, global = true)]
    machine_readable: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a p-encoder file and certify its column distance profile
    Analyze {
        file: PathBuf,
        /// Largest window index to certify
        #[arg(long, default_value_t = 2)]
        jmax: usize,
        /// Candidate budget per window (env ZPRCODES_BUDGET)
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Build a certified MDP (n, k, delta)-code over Z_{p^r}, k | delta
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        delta: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        r: u32,
        /// Seed for the randomized field-encoder search; omit for exhaustive
        #[arg(long)]
        seed: Option<u64>,
        /// Attempt cap for the randomized search
        #[arg(long)]
        cap: Option<u64>,
        #[arg(long)]
        budget: Option<u128>,
        /// Write the p-encoder file here (.json selects JSON)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bring a block generator file into standard or p-standard form
    Canonicalize {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = CanonicalForm::PEncoder)]
        form: CanonicalForm,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print B(j), the generalized Singleton bound, phi, L and X
    Bounds {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        delta: u64,
    },
    /// List every r-optimal parameter tuple of k
    OptimalParams {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        r: u32,
    },
    /// Split a generator file into p-power layers of free codes
    Decompose { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum CanonicalForm {
    Standard,
    PEncoder,
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

fn conv_failure(e: ConvError) -> Failure {
    match e {
        ConvError::BudgetExceeded { .. } => fail(4, e.to_string()),
        _ => fail(3, e.to_string()),
    }
}

fn lift_failure(e: LiftError) -> Failure {
    match &e {
        LiftError::InvalidParameters(_) => fail(2, e.to_string()),
        LiftError::SearchExhausted { .. } | LiftError::SearchSpaceTooLarge { .. } => {
            fail(5, e.to_string())
        }
        LiftError::Conv(ConvError::BudgetExceeded { .. }) => fail(4, e.to_string()),
        _ => fail(3, e.to_string()),
    }
}

fn env_u128(name: &str) -> Option<u128> {
    std::env::var(name).ok().and_then(|s| s.parse().ok())
}

fn budget_or_default(flag: Option<u128>) -> u128 {
    flag.or_else(|| env_u128("ZPRCODES_BUDGET")).unwrap_or(DEFAULT_BUDGET)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let workers = cli.workers.or_else(|| {
        std::env::var("ZPRCODES_WORKERS").ok().and_then(|s| s.parse().ok())
    });
    let machine = cli.machine_readable;
    let run = || match cli.command {
        Command::Analyze { file, jmax, budget } => {
            cmd_analyze(&file, jmax, budget_or_default(budget), machine)
        }
        Command::Construct { n, k, delta, p, r, seed, cap, budget, out } => cmd_construct(
            n,
            k,
            delta,
            p,
            r,
            seed,
            cap,
            budget_or_default(budget),
            out.as_deref(),
            machine,
        ),
        Command::Canonicalize { file, form, out } => {
            cmd_canonicalize(&file, form, out.as_deref(), machine)
        }
        Command::Bounds { n, k, r, delta } => cmd_bounds(n, k, r, delta, machine),
        Command::OptimalParams { k, r } => cmd_optimal_params(k, r, machine),
        Command::Decompose { file } => cmd_decompose(&file, machine),
    };
    let outcome = match workers {
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(w.max(1)).build();
            match pool {
                Ok(pool) => pool.install(run),
                Err(e) => Err(fail(2, format!("cannot build worker pool: {e}"))),
            }
        }
        None => run(),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure { code, message }) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

fn load_code(file: &std::path::Path) -> Result<(CodeFile, ConvCode), Failure> {
    let parsed = CodeFile::read(file).map_err(|e| fail(3, e.to_string()))?;
    if parsed.role != Role::PEncoder {
        return Err(fail(
            3,
            "analysis needs a p-encoder file; run canonicalize on generator files first",
        ));
    }
    let matrix = parsed.matrix().map_err(|e| fail(3, e.to_string()))?;
    let code = ConvCode::new(matrix)
        .map_err(|e| fail(3, format!("invalid p-encoder: {e}")))?;
    Ok((parsed, code))
}

fn report_bounds(report: &mut Report, bounds: &BoundSet) {
    report.line(format!(
        "bounds: SB = {}, phi = {}/{}, L = {}, X = {}/{}",
        bounds.singleton.sb,
        bounds.singleton.phi_num,
        bounds.r,
        bounds.l.l,
        bounds.l.x_num,
        bounds.l.x_den,
    ));
    report.kv("sb", bounds.singleton.sb);
    report.kv("phi", format!("{}/{}", bounds.singleton.phi_num, bounds.r));
    report.kv("l", bounds.l.l);
    report.kv("x", format!("{}/{}", bounds.l.x_num, bounds.l.x_den));
}

fn cmd_analyze(
    file: &std::path::Path,
    jmax: usize,
    budget: u128,
    machine: bool,
) -> Result<(), Failure> {
    let (parsed, code) = load_code(file)?;
    let mut report = Report::new();
    report.line(format!(
        "input: {} over Z_{} ({} rows, length {})",
        file.display(),
        code.ring().modulus(),
        code.k(),
        code.n()
    ));
    report.kv("p", parsed.p);
    report.kv("r", parsed.r);
    report.kv("n", code.n());
    report.kv("k", code.k());
    report.fact("delta", code.delta(), format!("p-degree delta = {}", code.delta()));
    report.fact(
        "delay_free",
        code.is_delay_free(),
        format!("delay-free: {}", code.is_delay_free()),
    );
    report.fact("reduced", code.is_reduced(), format!("reduced: {}", code.is_reduced()));
    if !code.is_delay_free() {
        report.print(machine);
        return Err(fail(3, "p-encoder is not delay-free; column distances are undefined"));
    }
    let params = code.parameters().map_err(conv_failure)?;
    report.fact("params", params.to_string(), format!("parameters of Im G(0): {params}"));
    // free-layer ranks, when the encoder decomposes cleanly
    if let Some(ranks) = code.free_layer_ranks() {
        let ranks: Vec<String> = ranks.iter().map(usize::to_string).collect();
        report.fact(
            "ranks",
            ranks.join(","),
            format!("free layer ranks: ({})", ranks.join(",")),
        );
    }
    let bounds = code.bound_set().ok();
    match &bounds {
        Some(b) => report_bounds(&mut report, b),
        None => report.line("bounds: degenerate rate (ceil(k/r) = n), B(j) = 1".to_string()),
    }
    let (n, k, r) = (code.n() as u64, code.k() as u64, code.ring().r());
    report.line(format!("{:>3} {:>6} {:>6}  {:<8} witness", "j", "d^c_j", "B(j)", "status"));
    let mut budget_hit = None;
    for j in 0..=jmax {
        match code.column_distance(j, budget) {
            Ok(entry) => {
                let b = bound_b(n, k, r, j as u64).map_err(conv_failure)?;
                report.line(format!(
                    "{:>3} {:>6} {:>6}  exact    {}",
                    j,
                    entry.value,
                    b,
                    render_witness(&entry.witness)
                ));
                report.kv(format!("dc.{j}"), entry.value);
                report.kv(format!("b.{j}"), b);
                report.kv(format!("search.{j}"), entry.search_size);
                report.kv(format!("witness.{j}"), render_witness(&entry.witness));
            }
            Err(ConvError::BudgetExceeded { required, budget }) => {
                report.line(format!(
                    "{j:>3}      ?      ?  skipped  needs {required} > budget {budget}"
                ));
                report.kv(format!("dc.{j}"), "budget-exceeded");
                budget_hit = Some((required, budget));
                break;
            }
            Err(e) => return Err(conv_failure(e)),
        }
    }
    if let Some((required, budget)) = budget_hit {
        report.kv("status", "budget-exceeded");
        report.print(machine);
        return Err(fail(
            4,
            format!("window search needs {required} candidates, budget is {budget}"),
        ));
    }
    match code.is_mdp(budget) {
        Ok((mdp, _)) => {
            report.fact("mdp", mdp, format!("MDP: {mdp}"));
        }
        Err(ConvError::BudgetExceeded { required, budget }) => {
            report.kv("mdp", "budget-exceeded");
            report.print(machine);
            return Err(fail(
                4,
                format!("MDP certification needs {required} candidates, budget is {budget}"),
            ));
        }
        Err(e) => return Err(conv_failure(e)),
    }
    report.kv("status", "ok");
    report.print(machine);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_construct(
    n: usize,
    k: usize,
    delta: u64,
    p: u64,
    r: u32,
    seed: Option<u64>,
    cap: Option<u64>,
    budget: u128,
    out: Option<&std::path::Path>,
    machine: bool,
) -> Result<(), Failure> {
    let search = match seed {
        Some(seed) => SearchStrategy::SeededRandom { seed, cap: cap.unwrap_or(DEFAULT_CAP) },
        None => SearchStrategy::Exhaustive,
    };
    let built = construct_mdp(n, k, delta, p, r, &search, budget).map_err(lift_failure)?;
    let file = CodeFile::from_matrix(built.code.encoder(), Kind::Convolutional, Role::PEncoder);
    let mut report = Report::new();
    report.line(format!(
        "constructed an MDP ({n},{k},{delta})-code over Z_{}",
        built.spec.ring.modulus()
    ));
    report.kv("status", "ok");
    report.kv("n", n);
    report.kv("k", k);
    report.kv("delta", delta);
    report.kv("p", p);
    report.kv("r", r);
    report.line(format!("certified windows: j <= {}", built.l_ring));
    for entry in built.profile.entries() {
        report.line(format!(
            "  d^c_{} = {} (search over {} inputs, witness {})",
            entry.j,
            entry.value,
            entry.search_size,
            render_witness(&entry.witness)
        ));
        report.kv(format!("dc.{}", entry.j), entry.value);
        report.kv(format!("search.{}", entry.j), entry.search_size);
    }
    if let Ok(bounds) = built.code.bound_set() {
        report_bounds(&mut report, &bounds);
    }
    match out {
        Some(path) => {
            file.write(path).map_err(|e| fail(3, e.to_string()))?;
            report.line(format!("p-encoder written to {}", path.display()));
        }
        None => {
            report.line("p-encoder:".to_string());
            for line in file.to_text().lines() {
                report.line(format!("  {line}"));
            }
        }
    }
    report.print(machine);
    Ok(())
}

fn cmd_canonicalize(
    file: &std::path::Path,
    form: CanonicalForm,
    out: Option<&std::path::Path>,
    machine: bool,
) -> Result<(), Failure> {
    let parsed = CodeFile::read(file).map_err(|e| fail(3, e.to_string()))?;
    if parsed.kind != Kind::Block || parsed.role != Role::Generator {
        return Err(fail(3, "canonicalize expects a block generator file"));
    }
    let matrix = parsed.matrix().map_err(|e| fail(3, e.to_string()))?;
    let scalar = matrix.at_zero();
    let mut report = Report::new();
    let result = match form {
        CanonicalForm::Standard => {
            let s = standard_form(&scalar);
            report.line(format!(
                "standard form with parameters {} after column permutation {:?}",
                s.params(),
                s.permutation()
            ));
            report.kv("params", s.params());
            report.kv(
                "permutation",
                s.permutation()
                    .iter()
                    .map(usize::to_string)
                    .collect::<Vec<_>>()
                    .join(","),
            );
            CodeFile::from_matrix(&s.matrix().to_poly_matrix(), Kind::Block, Role::Generator)
        }
        CanonicalForm::PEncoder => {
            let code = BlockCode::new(scalar);
            let s = code.standard_form();
            report.line(format!(
                "p-encoder with parameters {} and p-dimension {}",
                s.params(),
                code.p_dimension()
            ));
            report.kv("params", s.params());
            report.kv("k", code.p_dimension());
            // expanded in the permuted coordinates, then mapped back
            CodeFile::from_matrix(&code.p_encoder().to_poly_matrix(), Kind::Block, Role::PEncoder)
        }
    };
    report.kv("status", "ok");
    match out {
        Some(path) => {
            result.write(path).map_err(|e| fail(3, e.to_string()))?;
            report.line(format!("written to {}", path.display()));
        }
        None => {
            for line in result.to_text().lines() {
                report.line(line.to_string());
            }
        }
    }
    report.print(machine);
    Ok(())
}

fn cmd_bounds(n: u64, k: u64, r: u32, delta: u64, machine: bool) -> Result<(), Failure> {
    let bounds = BoundSet::new(n, k, r, delta).map_err(conv_failure)?;
    let mut report = Report::new();
    report.line(format!("bounds for (n, k, delta) = ({n}, {k}, {delta}) over Z_p^{r}"));
    report.kv("status", "ok");
    report_bounds(&mut report, &bounds);
    let mut bs = Vec::new();
    for j in 0..=bounds.l.l {
        bs.push(bounds.bound_b(j).to_string());
        report.kv(format!("b.{j}"), bounds.bound_b(j));
    }
    report.line(format!("B(0..={}) = ({})", bounds.l.l, bs.join(",")));
    report.print(machine);
    Ok(())
}

fn cmd_optimal_params(k: u64, r: u32, machine: bool) -> Result<(), Failure> {
    if r == 0 {
        return Err(fail(2, "r must be at least 1"));
    }
    let sets = r_optimal_parameters(k, r);
    let mut report = Report::new();
    report.line(format!(
        "{} {r}-optimal parameter set(s) of {k}, each using ceil(k/r) = {} layers",
        sets.len(),
        k.div_ceil(r as u64)
    ));
    report.kv("status", "ok");
    report.kv("count", sets.len());
    for (i, set) in sets.iter().enumerate() {
        report.line(format!("  {set}"));
        report.kv(format!("set.{i}"), set);
    }
    report.print(machine);
    Ok(())
}

fn cmd_decompose(file: &std::path::Path, machine: bool) -> Result<(), Failure> {
    let parsed = CodeFile::read(file).map_err(|e| fail(3, e.to_string()))?;
    if parsed.role != Role::Generator {
        return Err(fail(3, "decompose expects a generator file"));
    }
    let matrix = parsed.matrix().map_err(|e| fail(3, e.to_string()))?;
    let layers = decompose(&matrix).map_err(conv_failure)?;
    let mut report = Report::new();
    report.kv("status", "ok");
    let counts: Vec<String> = layers.iter().map(|l| l.k().to_string()).collect();
    report.line(format!("free layer ranks (l_0, .., l_{}): ({})", layers.len() - 1, counts.join(",")));
    report.kv("ranks", counts.join(","));
    for (i, layer) in layers.iter().enumerate() {
        if layer.k() == 0 {
            continue;
        }
        report.line(format!("layer {i} (scaled by p^{i} in the generator):"));
        let rendered = CodeFile::from_matrix(layer, Kind::Convolutional, Role::Generator);
        for line in rendered.to_text().lines().skip(7) {
            report.line(format!("  {line}"));
        }
    }
    report.print(machine);
    Ok(())
}
