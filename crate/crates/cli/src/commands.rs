use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use lumpkit_core::analysis::BRUTE_FORCE_LIMIT;
use lumpkit_core::numeric::parse_rational;
use lumpkit_core::{
    brute_force_minimal, build_quotient, compress_with, export_dot, gen_consecutive_wins,
    gen_coupon, gen_gamblers_ruin, gen_hypercube, gen_negative_binomial, gen_pair_chain,
    parse_chain, preservation_check, reach_by_time, serialize_chain, verify_lumpability, AnyChain,
    Chain, Error, InitialDistribution, Targets, Weight,
};

use crate::{Family, GenArgs, Input};

/// What a successful run prints, and whether its checks passed.
pub struct Output {
    pub text: String,
    pub passed: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, passed: true }
    }
}

/// A run that could not produce output: exit status and one-line message.
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Invalid(_)
            | Error::NotLumpable(_)
            | Error::Trapped(_)
            | Error::NonUniqueMinimum { .. } => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

type Run = Result<Output, Failure>;

macro_rules! with_chain {
    ($any:expr, |$chain:ident, $targets:ident| $body:expr) => {
        match $any {
            AnyChain::Exact($chain, $targets) => $body,
            AnyChain::Float($chain, $targets) => $body,
        }
    };
}

fn read_chain(input: &Input) -> Result<AnyChain, Failure> {
    let text = match input.input.as_deref() {
        Some(path) if path != Path::new("-") => std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?,
        _ => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| usage(format!("cannot read standard input: {e}")))?;
            buf
        }
    };
    Ok(parse_chain(&text)?)
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn state(chain_labels: &[String], label: &str) -> Result<usize, Failure> {
    chain_labels
        .iter()
        .position(|l| l == label)
        .ok_or_else(|| Error::UnknownLabel(label.to_string()).into())
}

fn start<W: Weight>(
    chain: &Chain<W>,
    init: Option<&str>,
) -> Result<InitialDistribution<W>, Failure> {
    Ok(match init {
        Some(label) => InitialDistribution::point(chain.len(), state(chain.labels(), label)?)?,
        None => InitialDistribution::uniform(chain.len())?,
    })
}

/// Left-aligned columns separated by two spaces.
fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c + 1 == row.len() {
                line += cell;
            } else {
                let _ = write!(line, "{cell:<width$}  ", width = widths[c]);
            }
        }
        out += line.trim_end();
        out.push('\n');
    }
    out
}

pub fn gen(args: &GenArgs) -> Run {
    let literals: Vec<&str> = args
        .p
        .iter()
        .map(String::as_str)
        .chain(args.probs.iter().map(String::as_str))
        .collect();
    let exact = literals.iter().all(|s| parse_rational(s).is_some());
    if !exact && literals.iter().any(|s| s.contains('/')) {
        return Err(usage("probabilities mix fractions and decimals"));
    }
    let text = if exact {
        generate(args, parse_rational)?
    } else {
        generate(args, |s| {
            s.trim().parse::<f64>().ok().filter(|v| v.is_finite())
        })?
    };
    match &args.output {
        Some(path) => {
            write_file(path, &text)?;
            Ok(Output::ok(String::new()))
        }
        None => Ok(Output::ok(text)),
    }
}

fn generate<W: Weight>(
    args: &GenArgs,
    parse: impl Fn(&str) -> Option<W>,
) -> Result<String, Failure> {
    let num = |s: &str| parse(s).ok_or_else(|| usage(format!("{s:?} is not a probability")));
    let p = || num(args.p.as_deref().unwrap_or("1/2"));
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| usage(format!("--{flag} is required for this family")))
    };
    let probs = || {
        args.probs
            .iter()
            .map(|s| num(s))
            .collect::<Result<Vec<W>, _>>()
    };
    let (chain, targets) = match args.family {
        Family::Negbin => gen_negative_binomial(need(args.n, "n")?, p()?)?,
        Family::Consecutive => gen_consecutive_wins(need(args.n, "n")?, p()?)?,
        Family::Gamblers => gen_gamblers_ruin(
            need(args.n1, "n1")?,
            need(args.n2, "n2")?,
            p()?,
            args.merged,
        )?,
        Family::Hypercube => gen_hypercube(need(args.d, "d")?, args.merged)?,
        Family::Coupon => {
            let probs = if args.probs.is_empty() {
                let n = need(args.n, "n")?;
                if n == 0 {
                    return Err(usage("--n must be positive"));
                }
                vec![W::from_ratio(1, n as i64); n]
            } else {
                probs()?
            };
            gen_coupon(&probs)?
        }
        Family::Pairs => gen_pair_chain(need(args.n, "n")?, &probs()?, args.collapse)?,
    };
    Ok(serialize_chain(&chain, &targets))
}

pub fn compress(input: &Input, epsilon: f64, output: Option<&Path>, dot: Option<&Path>) -> Run {
    let any = read_chain(input)?;
    with_chain!(&any, |chain, targets| compress_report(
        chain, targets, epsilon, output, dot
    ))
}

fn compress_report<W: Weight>(
    chain: &Chain<W>,
    targets: &Targets,
    epsilon: f64,
    output: Option<&Path>,
    dot: Option<&Path>,
) -> Run {
    let result = compress_with(chain, targets, epsilon)?;
    let quotient = build_quotient(chain, &result.partition, targets, epsilon)?;
    let mut text = format!(
        "complexity: {}\niterations: {}\n",
        result.complexity(),
        result.steps
    );
    let mut rows = vec![vec![
        "block".to_string(),
        "label".to_string(),
        "members".to_string(),
    ]];
    for (b, members) in result.partition.blocks().iter().enumerate() {
        let names: Vec<&str> = members.iter().map(|&s| chain.label(s)).collect();
        rows.push(vec![
            b.to_string(),
            quotient.labels()[b].clone(),
            names.join(" "),
        ]);
    }
    text += &table(&rows);
    if let Some(path) = output {
        write_file(path, &serialize_chain(&quotient.chain, &quotient.targets))?;
    }
    if let Some(path) = dot {
        write_file(path, &export_dot(chain, targets, Some(&result.partition)))?;
    }
    Ok(Output::ok(text))
}

pub fn complexity(input: &Input, epsilon: f64) -> Run {
    let any = read_chain(input)?;
    let n = with_chain!(&any, |chain, targets| compress_with(
        chain, targets, epsilon
    )?
    .complexity());
    Ok(Output::ok(format!("{n}\n")))
}

pub fn analyze(input: &Input, tau: usize, init: Option<&str>) -> Run {
    let any = read_chain(input)?;
    with_chain!(&any, |chain, targets| {
        let mu = start(chain, init)?;
        let report = reach_by_time(chain, targets, &mu, tau)?;
        let mut rows = vec![std::iter::once("m".to_string())
            .chain(report.class_names.iter().cloned())
            .collect()];
        for m in 0..=tau {
            let mut row = vec![m.to_string()];
            row.extend(report.series.iter().map(|s| s[m].to_string()));
            rows.push(row);
        }
        Ok(Output::ok(table(&rows)))
    })
}

pub fn verify(input: &Input, epsilon: f64, oracle: bool) -> Run {
    let any = read_chain(input)?;
    with_chain!(&any, |chain, targets| verify_report(
        chain, targets, epsilon, oracle
    ))
}

const VERIFY_HORIZON: usize = 20;

fn verify_report<W: Weight>(
    chain: &Chain<W>,
    targets: &Targets,
    epsilon: f64,
    oracle: bool,
) -> Run {
    let verdict = |ok: bool| if ok { "ok" } else { "FAIL" };
    let result = compress_with(chain, targets, epsilon)?;
    let mut passed = true;
    let mut text = format!(
        "states: {}\ncomplexity: {}\n",
        chain.len(),
        result.complexity()
    );

    let lumpable = verify_lumpability(chain, &result.partition, targets, epsilon);
    passed &= lumpable;
    let _ = writeln!(text, "lumpable: {}", verdict(lumpable));

    let report = preservation_check(chain, targets, &result.partition, VERIFY_HORIZON)?;
    // Float quotients may drift by up to epsilon per step.
    let preserved = report
        .max_discrepancy
        .within(&W::zero(), epsilon * (VERIFY_HORIZON + 1) as f64);
    passed &= preserved;
    let _ = writeln!(
        text,
        "preservation (tau={VERIFY_HORIZON}): max discrepancy {}: {}",
        report.max_discrepancy,
        verdict(preserved)
    );

    if oracle {
        if chain.len() > BRUTE_FORCE_LIMIT {
            let _ = writeln!(
                text,
                "oracle: skipped ({} states > {BRUTE_FORCE_LIMIT})",
                chain.len()
            );
        } else {
            let line = match brute_force_minimal(chain, targets, epsilon) {
                Ok(best) => {
                    let same = best == result.partition;
                    passed &= same;
                    format!("oracle: {} blocks: {}", best.block_count(), verdict(same))
                }
                Err(e @ Error::NonUniqueMinimum { .. }) => {
                    passed = false;
                    format!("oracle: {e}: FAIL")
                }
                Err(e) => return Err(e.into()),
            };
            text += &line;
            text.push('\n');
        }
    }
    Ok(Output { text, passed })
}

pub fn simulate(input: &Input, tau: usize, trials: u64, seed: u64, init: Option<&str>) -> Run {
    let any = read_chain(input)?;
    with_chain!(&any, |chain, targets| {
        let mu = start(chain, init)?;
        let report = lumpkit_core::simulate(chain, targets, &mu, tau, trials, seed)?;
        let mut header = vec!["m".to_string()];
        for name in &report.class_names {
            header.push(name.clone());
            header.push(format!("se({name})"));
        }
        let mut rows = vec![header];
        for m in 0..=tau {
            let mut row = vec![m.to_string()];
            for c in 0..report.class_names.len() {
                row.push(format!("{:.6}", report.frequency(c, m)));
                row.push(format!("{:.6}", report.std_error(c, m)));
            }
            rows.push(row);
        }
        Ok(Output::ok(format!(
            "trials: {trials}\nseed: {seed}\n{}",
            table(&rows)
        )))
    })
}
