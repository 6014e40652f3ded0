use std::ffi::OsString;
use std::path::{Path, PathBuf};

use nrange_core::cnum::{self, CWeights};
use nrange_core::dilation::{
    self, Colligation, DilationDescriptor, DilationParameter, EigenvaluePrescription, SearchBudget,
};
use nrange_core::io::{self, InputData, SvgOptions};
use nrange_core::linalg::{self, c};
use nrange_core::ranges::{self, RankIndex};
use nrange_core::report::VerifyReport;
use nrange_core::sampling::{haar_unitary, item_rng};
use nrange_core::verify::{self, BlockRule, OperatorGenerator, SequenceRule};
use nrange_core::{ComplexMatrix, ConvexRegion, Error, Exec, Multiplicity, Operator, C64};

use crate::args::{
    Check, Cli, Command, DilationChoice, Format, Generator, InputArgs, Oracle, OutputArgs,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Passed,
    Failed,
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn invalid(message: impl Into<String>) -> CliError {
    CliError::Core(Error::InvalidArgument(message.into()))
}

pub fn run(cli: Cli) -> CliResult<Outcome> {
    let exec = configure_threads(cli.threads)?;
    match cli.command {
        Command::Range {
            input,
            k,
            grid,
            out,
        } => range(&input, &k, grid, exec, &out),
        Command::Cnum {
            input,
            weights,
            grid,
            samples,
            seed,
            cloud,
            out,
        } => cnum_command(&input, &weights, grid, samples, seed, cloud, exec, &out),
        Command::Dilate {
            input,
            kind,
            k,
            theta,
            lambda,
            seed,
            budget,
            out,
        } => {
            let a = load(&input)?.into_matrix()?;
            let budget = search_budget(budget, seed, exec);
            let descriptor = dilate(&a, kind, &k, theta, lambda.as_deref(), &budget)?;
            let text = serde_json::to_string_pretty(&descriptor)
                .map_err(|e| CliError::Io(e.to_string()))?;
            emit_single(&out, "json", &text)?;
            Ok(Outcome::Passed)
        }
        Command::Verify {
            check,
            input,
            k,
            grid,
            seed,
            budget,
            samples,
            n_max,
            directions,
            generator,
            k_list,
            n_trunc,
            timing,
            out,
        } => {
            let budget = search_budget(budget, seed, exec);
            let mut report = match check {
                Check::Glw => {
                    let a = load(&input)?.into_matrix()?;
                    verify::verify_glw(&a, finite_k(&k)?, grid, &budget)?
                }
                Check::Bt => {
                    let a = load(&input)?.into_matrix()?;
                    verify::verify_bt(&a, finite_k(&k)?, grid, &budget)?
                }
                Check::Trunc => verify::truncation_convergence(
                    &generator_for(generator),
                    finite_k(&k)?,
                    n_max,
                    directions,
                )?,
                Check::Normal => {
                    let eigs = normal_eigenvalues(load(&input)?)?;
                    verify::verify_normal_equivalence(&eigs, finite_k(&k)?, grid)?
                }
                Check::CnumGap => {
                    cnum::counterexample_gap_with(samples.unwrap_or(1000), seed, exec)
                }
                Check::InfExample => verify::example_counterexample_inf(
                    &parse_k_list(&k_list)?,
                    n_trunc,
                    samples.unwrap_or(16),
                    grid,
                    seed,
                    exec,
                )?,
            };
            if !timing {
                report.runtime_ms = 0;
            }
            emit_report(&out, &report)?;
            Ok(if report.passed {
                Outcome::Passed
            } else {
                Outcome::Failed
            })
        }
        Command::Oracle {
            which: Oracle::Shift { n, k, grid, out },
        } => {
            let region = ranges::shift_oracle_on_grid(n, k, grid)?;
            emit_region(&out, &region, true)?;
            Ok(Outcome::Passed)
        }
    }
}

fn configure_threads(threads: Option<usize>) -> CliResult<Exec> {
    match threads {
        Some(0) => Err(invalid("--threads must be positive")),
        Some(1) => Ok(Exec::Sequential),
        #[cfg(feature = "parallel")]
        Some(n) => {
            // A second initialization (only possible in-process) keeps the first pool.
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
            Ok(Exec::Parallel)
        }
        #[cfg(not(feature = "parallel"))]
        Some(_) => Ok(Exec::Sequential),
        None => Ok(Exec::default()),
    }
}

fn search_budget(restarts: usize, seed: u64, exec: Exec) -> SearchBudget {
    SearchBudget::default()
        .with_restarts(restarts)
        .with_seed(seed)
        .with_exec(exec)
}

fn load(input: &InputArgs) -> CliResult<InputData> {
    match (&input.input, input.shift) {
        (Some(path), _) => Ok(io::parse_matrix_file(path)?),
        (None, Some(0)) => Err(invalid("--shift must be positive")),
        (None, Some(n)) => Ok(InputData::Matrix(linalg::shift(n))),
        (None, None) => Err(invalid(
            "an input is required: pass --input FILE or --shift N",
        )),
    }
}

fn parse_k(text: &str) -> CliResult<RankIndex> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("inf") {
        return Ok(RankIndex::Infinite);
    }
    match t.parse::<usize>() {
        Ok(k) if k > 0 => Ok(RankIndex::Finite(k)),
        _ => Err(invalid(format!(
            "k must be a positive integer or \"inf\", got {text:?}"
        ))),
    }
}

fn finite_k(text: &str) -> CliResult<usize> {
    match parse_k(text)? {
        RankIndex::Finite(k) => Ok(k),
        RankIndex::Infinite => Err(invalid("k = inf is only accepted by `range`")),
    }
}

fn parse_k_list(text: &str) -> CliResult<Vec<usize>> {
    text.split(',').map(finite_k).collect()
}

fn parse_complex(text: &str) -> CliResult<C64> {
    let bad = || invalid(format!("cannot parse complex number {text:?}"));
    let mut parts = text.trim().splitn(2, ':');
    let re = parts
        .next()
        .unwrap_or("")
        .trim()
        .parse::<f64>()
        .map_err(|_| bad())?;
    let im = match parts.next() {
        Some(p) => p.trim().parse::<f64>().map_err(|_| bad())?,
        None => 0.0,
    };
    Ok(c(re, im))
}

fn parse_weights(text: &str) -> CliResult<CWeights> {
    let values = text
        .split(',')
        .map(parse_complex)
        .collect::<CliResult<Vec<_>>>()?;
    Ok(CWeights::new(values)?)
}

fn parse_lambda(text: &str) -> CliResult<C64> {
    let parts: Vec<&str> = text.split(',').collect();
    let bad = || invalid(format!("--lambda expects \"re,im\", got {text:?}"));
    if parts.len() != 2 {
        return Err(bad());
    }
    let re = parts[0].trim().parse::<f64>().map_err(|_| bad())?;
    let im = parts[1].trim().parse::<f64>().map_err(|_| bad())?;
    Ok(c(re, im))
}

fn generator_for(g: Generator) -> OperatorGenerator {
    match g {
        Generator::Diagonal => OperatorGenerator::Diagonal(SequenceRule::OneMinusReciprocal),
        Generator::Shift => OperatorGenerator::WeightedShift(SequenceRule::Constant(c(1.0, 0.0))),
        Generator::Blocks => OperatorGenerator::BlockDirectSum(BlockRule::RotatingPairs),
    }
}

fn normal_eigenvalues(data: InputData) -> CliResult<Vec<C64>> {
    match data {
        InputData::Matrix(a) => Ok(linalg::eigenvalues(&a)?),
        InputData::Model(model) => {
            let mut eigs = Vec::new();
            for atom in model.atoms() {
                match atom.multiplicity {
                    Multiplicity::Finite(m) => {
                        eigs.extend(std::iter::repeat_n(atom.point, m as usize))
                    }
                    Multiplicity::Infinite => {
                        return Err(invalid(
                            "normal check needs finite multiplicities; got an infinite atom",
                        ))
                    }
                }
            }
            Ok(eigs)
        }
    }
}

fn range(
    input: &InputArgs,
    k: &str,
    grid: usize,
    exec: Exec,
    out: &OutputArgs,
) -> CliResult<Outcome> {
    let data = load(input)?;
    let k = parse_k(k)?;
    let (region, unit_circle) = match data {
        InputData::Matrix(a) => {
            let region = match k {
                RankIndex::Finite(k) => ranges::omega_region_with(&a, k, grid, exec)?,
                RankIndex::Infinite => ranges::omega_inf(&Operator::Matrix(a.clone()), grid)?,
            };
            (region, linalg::op_norm(&a) <= 1.0 + 1e-12)
        }
        InputData::Model(model) => {
            let inside = model
                .atoms()
                .iter()
                .all(|atom| atom.point.norm() <= 1.0 + 1e-12);
            let region = match k {
                RankIndex::Infinite => ranges::omega_inf(&Operator::Model(model), grid)?,
                finite => ranges::spectral_v_k(&model, finite, grid)?,
            };
            (region, inside)
        }
    };
    emit_region(out, &region, unit_circle)?;
    Ok(Outcome::Passed)
}

#[allow(clippy::too_many_arguments)]
fn cnum_command(
    input: &InputArgs,
    weights: &str,
    grid: usize,
    samples: usize,
    seed: u64,
    cloud: bool,
    exec: Exec,
    out: &OutputArgs,
) -> CliResult<Outcome> {
    let a = load(input)?.into_matrix()?;
    linalg::check_finite(&a)?;
    let w = parse_weights(weights)?;
    let real = w.values().iter().all(|z| z.im == 0.0);
    if cloud || !real {
        let points = cnum::c_sampled_with(&w, &a, samples, seed, exec)?;
        let text = match out.format {
            Some(Format::Json) => points_json(&points)?,
            Some(Format::Svg) => return Err(invalid("point clouds are exported as csv or json")),
            Some(Format::Csv) | None => io::points_csv(&points),
        };
        let ext = if out.format == Some(Format::Json) {
            "json"
        } else {
            "csv"
        };
        emit_single(out, ext, &text)?;
    } else if is_hermitian(&a) {
        let (alpha, beta) = cnum::c_interval_hermitian(&w, &a)?;
        let text = serde_json::json!({
            "interval": [nrange_core::report::float::to_repr(alpha),
                         nrange_core::report::float::to_repr(beta)],
        });
        emit_single(out, "json", &text.to_string())?;
    } else {
        let region = cnum::c_region_with(&w, &a, grid, exec)?;
        emit_region(out, &region, false)?;
    }
    Ok(Outcome::Passed)
}

fn is_hermitian(a: &ComplexMatrix) -> bool {
    let scale = linalg::fro(a).max(1.0);
    linalg::fro(&(a - a.adjoint())) <= 1e-10 * scale
}

fn points_json(points: &[C64]) -> CliResult<String> {
    let list: Vec<[f64; 2]> = points.iter().map(|z| [z.re, z.im]).collect();
    serde_json::to_string(&list).map_err(|e| CliError::Io(e.to_string()))
}

fn dilate(
    a: &ComplexMatrix,
    kind: DilationChoice,
    k: &str,
    theta: f64,
    lambda: Option<&str>,
    budget: &SearchBudget,
) -> CliResult<serde_json::Value> {
    let to_value =
        |d: &DilationDescriptor| serde_json::to_value(d).map_err(|e| CliError::Io(e.to_string()));
    match kind {
        DilationChoice::Halmos => {
            let p = DilationParameter::halmos();
            let u = p.build(a)?;
            to_value(&DilationDescriptor::new(a, &p, &u))
        }
        DilationChoice::Family => {
            linalg::check_finite(a)?;
            let uo = haar_unitary(a.nrows(), &mut item_rng(budget.seed, 0));
            let p = DilationParameter::family(uo)?;
            let u = p.build(a)?;
            to_value(&DilationDescriptor::new(a, &p, &u))
        }
        DilationChoice::Minimal => {
            let d = Colligation::new(a)?.d();
            let v = haar_unitary(d, &mut item_rng(budget.seed, 0));
            let w = haar_unitary(d, &mut item_rng(budget.seed, 1));
            let p = DilationParameter::minimal(v, w)?;
            let u = p.build(a)?;
            to_value(&DilationDescriptor::new(a, &p, &u))
        }
        DilationChoice::Extremal => {
            let k = finite_k(k)?;
            let ext = dilation::extremal_dilation(a, k, theta, budget)?.check()?;
            let mut value = to_value(&DilationDescriptor::new(a, &ext.parameter, &ext.u))?;
            value["theta"] = theta.into();
            value["k"] = k.into();
            value["target_support"] = ext.target.into();
            value["achieved_support"] = ext.achieved.into();
            value["gap"] = ext.gap.into();
            value["construction"] =
                serde_json::to_value(ext.construction).map_err(|e| CliError::Io(e.to_string()))?;
            Ok(value)
        }
        DilationChoice::Prescribed => {
            let lambda = parse_lambda(
                lambda.ok_or_else(|| invalid("--kind prescribed needs --lambda re,im"))?,
            )?;
            let d = Colligation::new(a)?.d();
            let rx = EigenvaluePrescription::single(lambda, d)?;
            let pd = dilation::prescribed_eigenvalue_ndilation(a, &rx, budget)?.check()?;
            let mut value = to_value(&DilationDescriptor::new(a, &pd.parameter, &pd.u))?;
            value["lambda"] = serde_json::json!([lambda.re, lambda.im]);
            value["multiplicity"] = d.into();
            value["eigen_residual"] = pd.residual.into();
            value["construction"] =
                serde_json::to_value(pd.construction).map_err(|e| CliError::Io(e.to_string()))?;
            Ok(value)
        }
    }
}

fn with_extension(prefix: &Path, ext: &str) -> PathBuf {
    let mut s: OsString = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn print(text: &str) -> CliResult<()> {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    let result = stdout.write_all(text.as_bytes()).and_then(|()| {
        if text.ends_with('\n') {
            Ok(())
        } else {
            stdout.write_all(b"\n")
        }
    });
    match result.and_then(|()| stdout.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            Err(CliError::Io(format!("stdout: {e}")))
        }
        _ => Ok(()),
    }
}

/// Writes `text` to `PREFIX.ext`, or to stdout without `--output`.
fn emit_single(out: &OutputArgs, ext: &str, text: &str) -> CliResult<()> {
    match &out.output {
        Some(prefix) => write_file(&with_extension(prefix, ext), text),
        None => print(text),
    }
}

fn render_region(region: &ConvexRegion, format: Format, unit_circle: bool) -> String {
    match format {
        Format::Svg => io::region_svg(region, SvgOptions { unit_circle }),
        Format::Csv => io::region_csv(region),
        Format::Json => io::region_json(region),
    }
}

/// Regions go to `PREFIX.svg` and `PREFIX.csv` unless a single format is
/// requested; stdout gets CSV by default.
fn emit_region(out: &OutputArgs, region: &ConvexRegion, unit_circle: bool) -> CliResult<()> {
    match (&out.output, out.format) {
        (Some(prefix), None) => {
            write_file(
                &with_extension(prefix, "svg"),
                &render_region(region, Format::Svg, unit_circle),
            )?;
            write_file(
                &with_extension(prefix, "csv"),
                &render_region(region, Format::Csv, unit_circle),
            )
        }
        (Some(prefix), Some(f)) => write_file(
            &with_extension(prefix, extension(f)),
            &render_region(region, f, unit_circle),
        ),
        (None, f) => print(&render_region(
            region,
            f.unwrap_or(Format::Csv),
            unit_circle,
        )),
    }
}

fn extension(f: Format) -> &'static str {
    match f {
        Format::Svg => "svg",
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

/// Reports go to `PREFIX.json` plus the `PREFIX.csv` gap table, or to
/// stdout as JSON.
fn emit_report(out: &OutputArgs, report: &VerifyReport) -> CliResult<()> {
    match (&out.output, out.format) {
        (_, Some(Format::Svg)) => Err(invalid("reports are exported as json or csv")),
        (Some(prefix), None) => {
            write_file(&with_extension(prefix, "json"), &report.to_json())?;
            write_file(&with_extension(prefix, "csv"), &report.gap_table_csv())
        }
        (Some(prefix), Some(f)) => {
            let text = if f == Format::Csv {
                report.gap_table_csv()
            } else {
                report.to_json()
            };
            write_file(&with_extension(prefix, extension(f)), &text)
        }
        (None, f) => print(&if f == Some(Format::Csv) {
            report.gap_table_csv()
        } else {
            report.to_json()
        }),
    }
}
