//! Command implementations: config resolution, cached completion, and the
//! text/JSON/CSV renderings of each command's result.

use crate::cache;
use clap::{Args, ValueEnum};
use itertools::Itertools;
use operad_forge_core::{
    checks::{run_check, CheckConfig, CheckReport, CHECK_NAMES},
    expand::{expand_instance, ShufflePresentation},
    scalar,
    series::{self, Egf},
    sig::{ClassTag, Symmetry},
    Element, Error, OrderSpec, Presentation, PresetId, RelationExpr, RewriteSystem,
    DEFAULT_STEP_LIMIT,
};
use serde_json::json;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

type Result<T> = std::result::Result<T, Error>;

/// Where the presentation comes from: a built-in preset or a JSON file.
#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
pub struct SourceOpts {
    /// Built-in preset: com, lie, ass, poisson, prelie, fm, plc, almost(com,lie)
    #[arg(long, value_name = "NAME")]
    pub preset: Option<String>,
    /// Presentation file: JSON {name, generators, relations, notes}
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
}

#[derive(Args, Clone)]
pub struct RunOpts {
    /// Monomial order
    #[arg(long, value_enum, default_value_t = OrderName::Pathlex)]
    pub order: OrderName,
    /// Truncation arity
    #[arg(long, value_name = "N", default_value_t = 5)]
    pub max_arity: usize,
    /// Reduction step budget
    #[arg(long, value_name = "K", default_value_t = DEFAULT_STEP_LIMIT)]
    pub step_limit: u64,
    /// Cap on worker threads
    #[arg(long, value_name = "T")]
    pub threads: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write to a file instead of stdout
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
pub enum OrderName {
    /// Path-lexicographic (admissible)
    Pathlex,
    /// Bracket-weighted path-lexicographic, heavier first (admissible)
    WeightedPathlex,
    /// Class-augmented comparison over a pathlex fallback (not admissible;
    /// reduction is step-limited)
    XyAugmented,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// A fully resolved run: the presentation, the order it runs under, and the
/// arity/budget/output plumbing.
pub struct RunConfig {
    pub presentation: Presentation,
    pub order: OrderSpec,
    pub max_arity: usize,
    pub step_limit: u64,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn resolve(source: &SourceOpts, opts: &RunOpts) -> Result<RunConfig> {
        if opts.max_arity == 0 {
            return Err(Error::Invalid("--max-arity must be at least 1".into()));
        }
        let presentation = load_presentation(source)?;
        let order = order_spec(opts.order, &presentation)?;
        Ok(RunConfig {
            presentation,
            order,
            max_arity: opts.max_arity,
            step_limit: opts.step_limit,
            format: opts.format,
            output: opts.output.clone(),
        })
    }
}

fn load_presentation(source: &SourceOpts) -> Result<Presentation> {
    match (&source.preset, &source.input) {
        (Some(name), None) => Ok(operad_forge_core::preset(PresetId::from_str(name)?)),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)?;
            Presentation::from_json(&serde_json::from_str(&text)?)
        }
        // clap's arg group guarantees exactly one source
        _ => Err(Error::Invalid("exactly one of --preset/--input is required".into())),
    }
}

fn order_spec(name: OrderName, p: &Presentation) -> Result<OrderSpec> {
    match name {
        OrderName::Pathlex => Ok(OrderSpec::path_lex()),
        OrderName::WeightedPathlex => {
            // antisymmetric generators weigh 1 (the bracket-filtration
            // convention); everything else weighs 0
            let weights: BTreeMap<String, u64> = p
                .signature()
                .symbols()
                .iter()
                .map(|s| {
                    (s.name.clone(), u64::from(s.symmetry == Symmetry::Antisymmetric))
                })
                .collect();
            Ok(OrderSpec::WeightedPathLex {
                weights,
                heavier_first: true,
                precedence: None,
            })
        }
        OrderName::XyAugmented => {
            let class = |tag: ClassTag| -> Vec<&str> {
                p.signature()
                    .symbols()
                    .iter()
                    .filter(|s| s.class_tag == tag)
                    .map(|s| s.name.as_str())
                    .collect()
            };
            let x = class(ClassTag::X);
            let y = class(ClassTag::Y);
            if x.is_empty() || y.is_empty() {
                return Err(Error::Invalid(
                    "xy-augmented needs generators carrying X/Y classes (an almost \
                     composite presentation)"
                        .into(),
                ));
            }
            Ok(OrderSpec::xy_augmented(&x, &y, OrderSpec::path_lex()))
        }
    }
}

/// Caps the global worker pool.  Must run before any parallel work.
pub fn cap_threads(threads: Option<usize>) -> Result<()> {
    let Some(t) = threads else { return Ok(()) };
    if t == 0 {
        return Err(Error::Invalid("--threads must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(t)
        .build_global()
        .map_err(|e| Error::Invalid(format!("thread pool: {e}")))
}

/// Completes the configured presentation, consulting the cache when
/// `OPERAD_FORGE_CACHE` is set.
fn completed_system(cfg: &RunConfig) -> Result<RewriteSystem> {
    let key = cache::cache_key(&cfg.presentation, &cfg.order, cfg.max_arity, cfg.step_limit);
    if let Some(system) = cache::load(&key) {
        return Ok(system);
    }
    let sp = ShufflePresentation::from_presentation(&cfg.presentation)?;
    let mut system = RewriteSystem::from_presentation(
        &sp,
        cfg.order.clone(),
        cfg.max_arity,
        cfg.step_limit,
    )?;
    system.complete()?;
    cache::store(&key, &system);
    Ok(system)
}

fn emit(output: Option<&Path>, content: &str) -> Result<()> {
    let content = if content.ends_with('\n') {
        content.to_string()
    } else {
        format!("{content}\n")
    };
    match output {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

pub fn cmd_dims(cfg: &RunConfig) -> Result<i32> {
    let system = completed_system(cfg)?;
    let dims = system.dims(cfg.max_arity)?;
    let rendered = match cfg.format {
        Format::Text => dims.iter().join(","),
        Format::Csv => {
            let mut out = String::from("arity,dimension\n");
            for (i, d) in dims.iter().enumerate() {
                out.push_str(&format!("{},{}\n", i + 1, d));
            }
            out
        }
        Format::Json => serde_json::to_string_pretty(&json!({
            "name": cfg.presentation.name,
            "order": &cfg.order,
            "max_arity": cfg.max_arity,
            "dims": dims,
        }))?,
    };
    emit(cfg.output.as_deref(), &rendered)?;
    Ok(0)
}

/// Accepts either relation-expression syntax (`(a1 o a2) o a3`, arguments
/// used exactly once each) or monomial-sum syntax (`o(o(1,2),3) - o(1,o(2,3))`).
fn parse_element(cfg: &RunConfig, system: &RewriteSystem, text: &str) -> Result<Element> {
    match RelationExpr::parse(text, cfg.presentation.signature()) {
        Ok(rel) => {
            let identity: Vec<u32> = (1..=rel.arity() as u32).collect();
            expand_instance(&rel, &identity, system.signature())
        }
        Err(expr_err) => {
            Element::parse_text(text, system.signature()).map_err(|elem_err| {
                Error::Invalid(format!(
                    "could not parse the element: as a relation expression — {expr_err}; \
                     as a monomial sum — {elem_err}"
                ))
            })
        }
    }
}

pub fn cmd_normal_form(cfg: &RunConfig, element: &str, certificate: bool) -> Result<i32> {
    let system = completed_system(cfg)?;
    let input = parse_element(cfg, &system, element)?;
    if input.arity() > cfg.max_arity {
        return Err(Error::ArityAboveTruncation {
            arity: input.arity(),
            max: cfg.max_arity,
        });
    }
    let sig = system.signature();
    let (nf, steps) = system.reduce_with_certificate(&input)?;
    let rendered = match cfg.format {
        Format::Json => {
            let mut obj = json!({
                "input": input.to_text(sig),
                "normal_form": nf.to_text(sig),
                "is_zero": nf.is_zero(),
            });
            if certificate {
                obj["certificate"] = steps
                    .iter()
                    .map(|s| {
                        json!({
                            "monomial": s.monomial.to_text(sig),
                            "rule": s.rule,
                            "path": s.path,
                            "coeff": scalar::format_scalar(&s.coeff),
                        })
                    })
                    .collect();
            }
            serde_json::to_string_pretty(&obj)?
        }
        // the normal form is a single line of element text either way
        Format::Text | Format::Csv => {
            let mut out = nf.to_text(sig);
            if certificate {
                out.push('\n');
                out.push_str(&format!("# {} rewrite step(s)\n", steps.len()));
                for s in &steps {
                    out.push_str(&format!(
                        "# rule {} at path {:?} with coefficient {} on {}\n",
                        s.rule,
                        s.path,
                        scalar::format_scalar(&s.coeff),
                        s.monomial.to_text(sig),
                    ));
                }
            }
            out
        }
    };
    emit(cfg.output.as_deref(), &rendered)?;
    Ok(0)
}

pub fn cmd_complete(cfg: &RunConfig) -> Result<i32> {
    let system = completed_system(cfg)?;
    let dump = serde_json::to_string_pretty(&system.to_json())?;
    emit(cfg.output.as_deref(), &dump)?;
    Ok(0)
}

pub fn cmd_verify(
    name: &str,
    max_arity: Option<usize>,
    step_limit: u64,
    order: OrderName,
    format: Format,
    output: Option<&Path>,
) -> Result<i32> {
    if order != OrderName::Pathlex {
        return Err(Error::Invalid(
            "the named checks run under the canonical path-lexicographic order; \
             --order applies to dims/normal-form/complete"
                .into(),
        ));
    }
    let cfg = CheckConfig {
        max_arity,
        step_limit,
        ..CheckConfig::default()
    };
    let names: Vec<&str> = if name == "all" {
        CHECK_NAMES.to_vec()
    } else {
        vec![name]
    };
    let mut reports: Vec<CheckReport> = Vec::new();
    for n in &names {
        reports.push(run_check(n, &cfg)?);
    }
    emit(output, &render_reports(&reports, format)?)?;
    Ok(verify_exit_code(&reports))
}

/// 0 when every report passed (informational counts as passing), else 1.
fn verify_exit_code(reports: &[CheckReport]) -> i32 {
    i32::from(!reports.iter().all(CheckReport::passed))
}

fn render_reports(reports: &[CheckReport], format: Format) -> Result<String> {
    Ok(match format {
        Format::Text => {
            let mut out = String::new();
            for r in reports {
                out.push_str(&r.to_text());
            }
            let failed = reports.iter().filter(|r| !r.passed()).count();
            out.push_str(&if failed == 0 {
                format!("{} check(s) passed\n", reports.len())
            } else {
                format!("{failed} of {} check(s) FAILED\n", reports.len())
            });
            out
        }
        Format::Json => {
            if reports.len() == 1 {
                serde_json::to_string_pretty(&reports[0].to_json())?
            } else {
                serde_json::to_string_pretty(&serde_json::Value::Array(
                    reports.iter().map(CheckReport::to_json).collect(),
                ))?
            }
        }
        Format::Csv => {
            let mut out = String::from("name,status,millis\n");
            for r in reports {
                let status = match r.to_json()["status"].as_str() {
                    Some(s) => s.to_string(),
                    None => unreachable!("status serializes to a string"),
                };
                out.push_str(&format!("{},{},{}\n", r.name, status, r.timing));
            }
            out
        }
    })
}

fn render_series(
    name: &str,
    f: &Egf,
    extras: &[(&str, String)],
    format: Format,
) -> Result<String> {
    let dims: Vec<String> = f.dims_view().iter().map(scalar::format_scalar).collect();
    Ok(match format {
        Format::Text => {
            let mut out = String::new();
            for (n, c) in f.coefficient_rows() {
                out.push_str(&format!("t^{n}: {c}\n"));
            }
            out.push_str(&format!("dims view: {}\n", dims.iter().join(",")));
            for (label, value) in extras {
                out.push_str(&format!("{label}: {value}\n"));
            }
            out
        }
        Format::Csv => {
            let mut out = String::from("n,coefficient,dims_view\n");
            for (n, c) in f.coefficient_rows() {
                let dim = if n >= 1 { dims[n - 1].as_str() } else { "" };
                out.push_str(&format!("{n},{c},{dim}\n"));
            }
            out
        }
        Format::Json => {
            let mut obj = json!({
                "name": name,
                "order": f.order(),
                "coefficients": f.coefficient_rows().iter().map(|(_, c)| c.clone()).collect::<Vec<_>>(),
                "dims_view": dims,
            });
            for (label, value) in extras {
                obj[*label] = json!(value);
            }
            serde_json::to_string_pretty(&obj)?
        }
    })
}

pub fn cmd_series_tree_egf(order: usize, format: Format, output: Option<&Path>) -> Result<i32> {
    let f = series::tree_egf(order);
    let rendered = render_series("tree-egf", &f, &[], format)?;
    emit(output, &rendered)?;
    Ok(0)
}

pub fn cmd_series_euler_chain(
    order: usize,
    format: Format,
    output: Option<&Path>,
) -> Result<i32> {
    let t = Egf::t(order);
    let presets = series::euler_presets(order);
    let sum = presets
        .iter()
        .try_fold(Egf::zero(order), |acc, (_, s)| acc.add(s))?;
    let target = t.sub(&series::t_exp_neg_t(order))?;
    let matches = sum == target;
    let rows: Vec<(&str, &Egf)> = presets
        .iter()
        .map(|(n, s)| (*n, s))
        .chain([("sum", &sum), ("t - t*exp(-t)", &target)])
        .collect();
    let rendered = match format {
        Format::Text => {
            let mut out = String::new();
            for (name, s) in &rows {
                let coeffs = s.coefficient_rows().iter().map(|(_, c)| c.clone()).join(", ");
                out.push_str(&format!("{name}: {coeffs}\n"));
            }
            out.push_str(&format!("sum matches t - t*exp(-t): {matches}\n"));
            out
        }
        Format::Csv => {
            let mut out = String::from("series,n,coefficient\n");
            for (name, s) in &rows {
                for (n, c) in s.coefficient_rows() {
                    out.push_str(&format!("{name},{n},{c}\n"));
                }
            }
            out
        }
        Format::Json => {
            let series_obj: serde_json::Map<String, serde_json::Value> = rows
                .iter()
                .map(|(name, s)| {
                    (
                        name.to_string(),
                        json!(s
                            .coefficient_rows()
                            .iter()
                            .map(|(_, c)| c.clone())
                            .collect::<Vec<_>>()),
                    )
                })
                .collect();
            serde_json::to_string_pretty(&json!({
                "order": order,
                "series": series_obj,
                "sum_matches": matches,
            }))?
        }
    };
    emit(output, &rendered)?;
    if !matches {
        // an identity the library itself tests; failing here means the
        // binary and library disagree
        return Err(Error::Series("Euler chain sum mismatch".into()));
    }
    Ok(0)
}

pub fn cmd_series_invert(
    input: &str,
    order: usize,
    format: Format,
    output: Option<&Path>,
) -> Result<i32> {
    let f = series::parse_series(input, order)?;
    let g = f.comp_inverse()?;
    let composes = f.compose(&g)? == Egf::t(order);
    let rendered = render_series(
        "inverse",
        &g,
        &[("composes back to t", composes.to_string())],
        format,
    )?;
    emit(output, &rendered)?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use operad_forge_core::checks::{CheckStatus, Witness};
    use operad_forge_core::preset;

    fn report(name: &str, status: CheckStatus) -> CheckReport {
        CheckReport {
            name: name.to_string(),
            status,
            witnesses: vec![Witness { label: "leg".into(), value: "0".into() }],
            dims: BTreeMap::new(),
            timing: 1,
            order: serde_json::to_value(OrderSpec::path_lex()).unwrap(),
            fingerprints: BTreeMap::new(),
        }
    }

    #[test]
    fn verify_exit_codes_follow_the_contract() {
        let pass = report("a", CheckStatus::Pass);
        let info = report("b", CheckStatus::Info);
        let fail = report("c", CheckStatus::Fail);
        assert_eq!(verify_exit_code(&[pass.clone(), info.clone()]), 0);
        assert_eq!(verify_exit_code(&[pass.clone(), fail.clone()]), 1);
        let text = render_reports(&[pass, info, fail], Format::Text).unwrap();
        assert!(text.contains("1 of 3 check(s) FAILED"));
    }

    #[test]
    fn csv_report_rows_carry_name_and_status() {
        let rows =
            render_reports(&[report("gamma", CheckStatus::Fail)], Format::Csv).unwrap();
        assert_eq!(rows, "name,status,millis\ngamma,fail,1\n");
    }

    #[test]
    fn order_flag_resolution() {
        let fm = preset(PresetId::Fm);
        match order_spec(OrderName::WeightedPathlex, &fm).unwrap() {
            OrderSpec::WeightedPathLex { weights, heavier_first, .. } => {
                assert!(heavier_first);
                assert_eq!(weights["b"], 1);
                assert_eq!(weights["o"], 0);
            }
            other => panic!("expected weighted order, got {other:?}"),
        }
        let almost = operad_forge_core::almost_composite(
            &preset(PresetId::Com),
            &preset(PresetId::Lie),
        )
        .unwrap();
        match order_spec(OrderName::XyAugmented, &almost).unwrap() {
            OrderSpec::XyAugmented { x, y, .. } => {
                assert!(x.contains("o"));
                assert!(y.contains("b"));
            }
            other => panic!("expected augmented order, got {other:?}"),
        }
        assert!(order_spec(OrderName::XyAugmented, &preset(PresetId::Com)).is_err());
    }

    #[test]
    fn cache_keys_separate_configurations() {
        let fm = preset(PresetId::Fm);
        let base = cache::cache_key(&fm, &OrderSpec::path_lex(), 4, 1000);
        assert_eq!(base, cache::cache_key(&fm, &OrderSpec::path_lex(), 4, 1000));
        assert_ne!(base, cache::cache_key(&fm, &OrderSpec::path_lex(), 5, 1000));
        assert_ne!(base, cache::cache_key(&fm, &OrderSpec::path_lex(), 4, 999));
        assert_ne!(
            base,
            cache::cache_key(&preset(PresetId::PreLie), &OrderSpec::path_lex(), 4, 1000)
        );
    }

    #[test]
    fn expression_and_monomial_syntax_agree() {
        let cfg = RunConfig {
            presentation: preset(PresetId::Com),
            order: OrderSpec::path_lex(),
            max_arity: 3,
            step_limit: DEFAULT_STEP_LIMIT,
            format: Format::Text,
            output: None,
        };
        let system = completed_system(&cfg).unwrap();
        let via_expr = parse_element(&cfg, &system, "(a1 o a2) o a3").unwrap();
        let via_monomial = parse_element(&cfg, &system, "o(o(1,2),3)").unwrap();
        assert_eq!(via_expr, via_monomial);
        let err = parse_element(&cfg, &system, "nonsense!").unwrap_err();
        assert!(err.to_string().contains("monomial sum"));
    }
}
