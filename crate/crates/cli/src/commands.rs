use std::fmt::Write as _;
use std::sync::Arc;
use std::time::Instant;

use serde_json::{json, Map, Value};
use wkl_core::hermgroup::hc_factorize;
use wkl_core::holods::{basis_vector, extract_mu, DSParams, DSStatus};
use wkl_core::pkn::{pkn_factorize, pkn_membership};
use wkl_core::quad::gauss_legendre;
use wkl_core::whittaker::{gn_l2_norm_full, gn_l2_norm_reduced, lower_cutoff, reduced_integrand, FullOptions, L2Norm};
use wkl_core::{BlockSpec, Error, GroupElement, KRep, RootDatum, Sign, WhittakerKernel};

use crate::args::{
    DecomposeArgs, Group, L2Args, Method, PlancherelArgs, RepArgs, SampleArgs, VerifyArgs, WhittakerArgs,
};
use crate::json::{self, matrix, real, vector};
use crate::report::Report;
use crate::suites::{self, Options};
use crate::CliError;

/// What a command produced: the primary document, an optional human summary
/// for stderr, and whether a verification failed.
#[derive(Debug, Default)]
pub struct Output {
    pub primary: String,
    pub human: Option<String>,
    pub failed: bool,
}

impl Output {
    fn json(v: &Value) -> Self {
        Output { primary: json::to_string(v) + "\n", ..Default::default() }
    }
}

fn envelope(command: &str, fields: Value) -> Value {
    let mut m = Map::new();
    m.insert("schema".into(), json!(1));
    m.insert("command".into(), json!(command));
    if let Value::Object(f) = fields {
        m.extend(f);
    }
    Value::Object(m)
}

fn root_datum(g: Group) -> Result<Arc<RootDatum>, CliError> {
    Ok(Arc::new(RootDatum::build(g.spec())?))
}

/// `e3` or `3` → 3.
fn basis_index(s: &str, dim: usize, what: &str) -> Result<usize, CliError> {
    let t = s.trim();
    let digits = t.strip_prefix('e').unwrap_or(t);
    let i: usize = digits.parse().map_err(|_| CliError::Usage(format!("{what} {s:?} is not a basis index like e0")))?;
    if i >= dim {
        return Err(CliError::Usage(format!("{what} index {i} out of range for dim V = {dim}")));
    }
    Ok(i)
}

/// `char:M` → `det^M`; `sym:M:K` → `det^M ⊗ Sym^K`.
pub fn parse_rep(s: &str, spec: BlockSpec) -> Result<KRep, CliError> {
    let bad = || CliError::Usage(format!("representation {s:?} is not char:M or sym:M:K"));
    let parts: Vec<&str> = s.trim().split(':').collect();
    match parts.as_slice() {
        ["char", m] => Ok(KRep::character(spec, m.parse().map_err(|_| bad())?)),
        ["sym", m, k] => Ok(KRep::sym(spec, m.parse().map_err(|_| bad())?, k.parse().map_err(|_| bad())?)),
        _ => Err(bad()),
    }
}

fn rep_of(r: &RepArgs) -> Result<KRep, CliError> {
    let spec = r.group.spec();
    match (&r.pi, r.lambda) {
        (Some(p), _) => parse_rep(p, spec),
        (None, Some(l)) => Ok(KRep::character(spec, -l)),
        (None, None) => Err(CliError::Usage("one of --pi or --lambda is required".into())),
    }
}

fn kernel_of(r: &RepArgs) -> Result<WhittakerKernel, CliError> {
    let rd = root_datum(r.group)?;
    let pi = rep_of(r)?;
    let eta = basis_vector(pi.dim(), basis_index(&r.eta, pi.dim(), "--eta")?);
    Ok(WhittakerKernel::new(pi, eta, rd, r.degree_cap)?)
}

fn element(group: Group, s: &str) -> Result<GroupElement, CliError> {
    let m = json::parse_matrix(s).map_err(CliError::Usage)?;
    if m.rows() != group.spec().n() || m.cols() != group.spec().n() {
        return Err(CliError::Usage(format!("{} needs a {n}x{n} matrix", group.name(), n = group.spec().n())));
    }
    Ok(match group {
        Group::Sl2 => GroupElement::sl2c(m)?,
        _ => GroupElement::su(m, group.spec())?,
    })
}

pub fn decompose(a: &DecomposeArgs) -> Result<Output, CliError> {
    let g = element(a.group, &a.element)?;
    let mut doc = if a.hc {
        let t = hc_factorize(&g)?;
        let residual = t.reassemble().dist(g.matrix()) / g.matrix().norm();
        json!({
            "factorization": "hc",
            "zplus": matrix(&t.zplus),
            "k": matrix(t.k.matrix()),
            "zminus": matrix(&t.zminus),
            "residual": real(residual),
        })
    } else {
        let rd = RootDatum::build(a.group.spec())?;
        let t = pkn_factorize(&g, &rd, Sign::Plus)?;
        json!({
            "factorization": "pkn",
            "z": matrix(&t.z),
            "k": matrix(t.k.matrix()),
            "n": matrix(t.n.matrix()),
            "coords": {
                "plus": vector(&t.coords.plus),
                "minus": vector(&t.coords.minus),
                "center": vector(&t.coords.center),
            },
            "residual": real(t.residual),
        })
    };
    if let Some(j) = a.parabolic {
        let rd = RootDatum::build(a.group.spec())?;
        doc["parabolic"] = json!({ "j": j, "member": pkn_membership(&g, j, &rd)? });
    }
    doc["group"] = json!(a.group.name());
    doc["element"] = matrix(g.matrix());
    Ok(Output::json(&envelope("decompose", doc)))
}

pub fn roots(group: Group) -> Result<Output, CliError> {
    let rd = RootDatum::build(group.spec())?;
    let table: Vec<Value> = rd
        .restricted_table
        .iter()
        .map(|rr| json!({ "label": rr.label, "lambda_coefficients": rr.lambda_coefficients(), "multiplicity": rr.multiplicity }))
        .collect();
    let (rn, rl, rho) = rd.rho_constants();
    let mut human = format!("{}: rank {}, {} type\n", group.name(), rd.rank, if rd.is_tube() { "tube" } else { "non-tube" });
    for rr in &rd.restricted_table {
        let _ = writeln!(human, "  {:>14}  mult {}", format!("{:?}", rr.lambda_coefficients()), rr.multiplicity);
    }
    let _ = writeln!(human, "  ρ_𝔫 = {rn:?}, ρ_𝔩 = {rl:?}, ρ = {rho:?}");
    let doc = envelope(
        "roots",
        json!({
            "group": group.name(),
            "rank": rd.rank,
            "tube": rd.is_tube(),
            "restricted_roots": table,
            "rho_n": rn,
            "rho_l": rl,
            "rho": rho,
            "nilradical": { "half_real_dim": rd.nil.basis_half.len(), "center_dim": rd.nil.center_dim(), "fock_dim": rd.nil.complex_dim() },
        }),
    );
    Ok(Output { human: Some(human), ..Output::json(&doc) })
}

pub fn verify(a: &VerifyArgs) -> Result<Output, CliError> {
    if a.degree_cap < 4 || a.quad_nodes < 2 {
        return Err(CliError::Usage("--degree-cap must be at least 4 and --quad-nodes at least 2".into()));
    }
    let o = Options { seed: a.seed, degree_cap: a.degree_cap, quad_nodes: a.quad_nodes, group: a.group };
    let start = Instant::now();
    let cases = suites::run(a.suite, &o);
    let report = Report::new(a.suite.name(), a.seed, cases, start.elapsed());
    Ok(Output { primary: json::to_string(&report) + "\n", human: Some(report.table()), failed: !report.ok() })
}

fn norm_status(ds: DSStatus, divergent: bool) -> &'static str {
    match ds {
        DSStatus::Boundary => "boundary",
        _ if divergent => "divergent",
        DSStatus::Below => "divergent",
        DSStatus::Above => "finite",
    }
}

fn norm_fields(n: &L2Norm) -> Value {
    let (value, err) = match &n.outcome {
        wkl_core::quad::HalfLine::Finite { value, error, .. } => (real(*value), real(*error)),
        wkl_core::quad::HalfLine::Divergent { .. } => (Value::Null, Value::Null),
    };
    json!({
        "status": norm_status(n.status, n.is_divergent()),
        "value": value,
        "err": err,
        "mu": n.mu,
        "rho": n.rho,
        "prefactor": real(n.prefactor),
        "integral": n.outcome,
    })
}

pub fn plancherel(a: &PlancherelArgs) -> Result<Output, CliError> {
    if a.lambda_max < 0 {
        return Err(CliError::Usage("--lambda-max must be non-negative".into()));
    }
    let rd = root_datum(a.group)?;
    let mut rows = Vec::new();
    let mut human = format!("{}: scalar series det^{{−λ}}\n{:>4}  {:>10}  {:>10}  {}\n", a.group.name(), "λ", "status", "μ", "‖Tξ‖²");
    for lam in 0..=a.lambda_max {
        let pi = KRep::character(rd.spec, -lam);
        let params = DSParams::new(&pi, &rd)?;
        let wk = WhittakerKernel::new(pi, vec![wkl_core::C64::new(1.0, 0.0)], rd.clone(), 4)?;
        let n = gn_l2_norm_reduced(&wk)?;
        let mut row = norm_fields(&n);
        row["lambda"] = json!(lam);
        row["discrete"] = json!(params.discrete());
        row["multiplicity"] = json!(if params.discrete() { 1 } else { 0 });
        let _ = writeln!(
            human,
            "{lam:>4}  {:>10}  {:>10}  {}",
            row["status"].as_str().unwrap_or("?"),
            n.mu.iter().map(|m| format!("{m:.4}")).collect::<Vec<_>>().join(","),
            n.value().map_or("—".to_string(), |v| format!("{v:.10e}"))
        );
        rows.push(row);
    }
    let doc = envelope("plancherel", json!({ "group": a.group.name(), "rho": rd.rho, "series": rows }));
    Ok(Output { human: Some(human), ..Output::json(&doc) })
}

pub fn whittaker(a: &WhittakerArgs) -> Result<Output, CliError> {
    if a.rep.group == Group::Sl2 {
        return Err(CliError::Usage("Whittaker sections live on SU(p,q); use --group su11".into()));
    }
    let wk = kernel_of(&a.rep)?;
    let x = match &a.at {
        Some(s) => element(a.rep.group, s)?,
        None => GroupElement::identity(a.rep.group.spec()),
    };
    let d = wk.pi().dim();
    let xi = basis_vector(d, basis_index(&a.xi, d, "--xi")?);
    let v = wk.t_lkt_eval(&xi, &x)?;
    let doc = envelope(
        "whittaker",
        json!({
            "group": a.rep.group.name(),
            "pi": wk.pi().to_string(),
            "eta": vector(wk.eta()),
            "xi": vector(&xi),
            "x": matrix(x.matrix()),
            "value": v,
            "norm": real(v.norm()),
        }),
    );
    Ok(Output::json(&doc))
}

pub fn l2norm(a: &L2Args) -> Result<Output, CliError> {
    let wk = kernel_of(&a.rep)?;
    let params = DSParams::new(wk.pi(), wk.root_datum())?;
    let mut doc = match a.method {
        Method::Reduced => norm_fields(&gn_l2_norm_reduced(&wk)?),
        Method::Full if !params.discrete() => {
            // Not square-integrable: report the classification instead of integrating.
            json!({
                "status": norm_status(params.status, true),
                "value": Value::Null,
                "err": Value::Null,
                "mu": params.mu,
                "rho": params.rho,
            })
        }
        Method::Full => {
            let opts = FullOptions { k_samples: a.k_samples.max(2), l_samples: 1, nodes_per_unit: a.quad_nodes.max(2), seed: a.rep.seed };
            let mut v = norm_fields(&gn_l2_norm_full(&wk, None, opts)?);
            v["options"] = json!(opts);
            v
        }
    };
    doc["group"] = json!(a.rep.group.name());
    doc["pi"] = json!(wk.pi().to_string());
    doc["method"] = json!(match a.method {
        Method::Reduced => "reduced",
        Method::Full => "full",
    });
    let human = format!(
        "{} {}: {} {}\n",
        a.rep.group.name(),
        wk.pi(),
        doc["status"].as_str().unwrap_or("?"),
        doc["value"].as_f64().map_or(String::new(), |v| format!("{v:.12e}"))
    );
    Ok(Output { human: Some(human), ..Output::json(&envelope("l2norm", doc)) })
}

/// Rows of `(t, integrand, ∫_{t₀}^t integrand)` where `t₀` is the lower
/// cut-off of the norm computation (or `t_min` if that is smaller).
pub fn sample_rows(a: &SampleArgs) -> Result<Vec<[f64; 3]>, CliError> {
    let rd = root_datum(a.group)?;
    if rd.rank != 1 {
        return Err(Error::Unsupported(format!("integrand sampling needs rank one; {} has rank {}", a.group.name(), rd.rank)).into());
    }
    if a.rows == 0 || !(a.t_max > a.t_min) || !a.t_min.is_finite() || !a.t_max.is_finite() {
        return Err(CliError::Usage("need rows > 0 and finite t_min < t_max".into()));
    }
    let mu = extract_mu(&KRep::character(rd.spec, -a.lambda), &rd)?.mu;
    let f = |t: f64| reduced_integrand(&rd, &mu, 1.0, &[t]);
    let rule = gauss_legendre(20);
    let mut prev = (-lower_cutoff(&rd, &mu, 1.0)).min(a.t_min);
    let mut acc = 0.0;
    let h = (a.t_max - a.t_min) / a.rows as f64;
    let mut out = Vec::with_capacity(a.rows);
    for i in 0..a.rows {
        let t = a.t_min + i as f64 * h;
        // Unit panels keep the cumulative sum accurate from the far cut-off.
        let panels = (t - prev).ceil().max(1.0) as usize;
        let w = (t - prev) / panels as f64;
        for p in 0..panels {
            acc += rule.integrate(prev + p as f64 * w, prev + (p + 1) as f64 * w, f);
        }
        prev = t;
        out.push([t, f(t), acc]);
    }
    Ok(out)
}

pub fn sample_integrand(a: &SampleArgs) -> Result<Output, CliError> {
    let rows = sample_rows(a)?;
    if a.output.json {
        let doc = envelope(
            "sample-integrand",
            json!({
                "group": a.group.name(),
                "lambda": a.lambda,
                "rows": rows.iter().map(|r| json!({ "t": real(r[0]), "integrand": real(r[1]), "partial_integral": real(r[2]) })).collect::<Vec<_>>(),
            }),
        );
        return Ok(Output::json(&doc));
    }
    let mut csv = String::from("t,integrand,partial_integral\n");
    for r in rows {
        let _ = writeln!(csv, "{:.16e},{:.16e},{:.16e}", r[0], r[1], r[2]);
    }
    Ok(Output { primary: csv, ..Default::default() })
}
