use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use nilmix::catalog::System;
use nilmix::correlate::{self, decay_fit, CorrelationSeries, IntegerAction};
use nilmix::dioph::{certificate_f64, diophantine_certificate, verify_lemma9};
use nilmix::exactlin::lyapunov::lyapunov_data_at;
use nilmix::exactlin::matrix::rational_to_json;
use nilmix::exactlin::RationalSquareMatrix;
use nilmix::fracsolve::{
    schrodinger_threshold, small_divisor_bound, solve_fractional, Directions, SampledProfile, ThresholdOptions,
};
use nilmix::nilalg::regular::action_matrix;
use nilmix::nilalg::{classify, find_regular_element, lyapunov_functionals};
use nilmix::rates::{density_estimate, holder_rate, order2_envelope, rho_chi, DensityOptions};
use nilmix::FourierObservable;

use crate::config::*;
use crate::output::{vector_field, Csv};

/// Invalid input maps to exit code 2, a failed computation to exit code 1.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Compute(nilmix::Error),
}

impl From<nilmix::Error> for Failure {
    fn from(e: nilmix::Error) -> Self {
        Failure::Compute(e)
    }
}

pub type Outcome = Result<Output, Failure>;

/// Everything a command produces besides the report envelope.
pub struct Output {
    pub config: Value,
    pub system: Option<Value>,
    pub result: Value,
    pub tables: Vec<(String, String)>,
    pub summary: Vec<String>,
    /// Working precision actually used, when the command computes spectral data.
    pub bits: Option<u32>,
}

pub struct Settings {
    pub precision: Option<u32>,
    pub seed: u64,
    pub config_dir: std::path::PathBuf,
}

fn cfg<T: Serialize>(c: &T) -> Value {
    serde_json::to_value(c).expect("config serializes")
}

fn val<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

fn resolve(s: &SystemRef) -> Result<System, Failure> {
    s.resolve().map_err(Failure::Config)
}

fn system_json(s: &System) -> Value {
    json!({
        "name": s.name,
        "algebra": s.algebra.to_spec(),
        "generators": s.generators,
    })
}

fn observable(j: &nilmix::fracsolve::ObservableJson, what: &str) -> Result<FourierObservable, Failure> {
    FourierObservable::try_from(j.clone()).map_err(|e| Failure::Config(format!("{what}: {e}")))
}

fn check_dim(o: &FourierObservable, dim: usize, what: &str) -> Result<(), Failure> {
    if o.dim() != dim {
        return Err(Failure::Config(format!("{what} has dimension {}, the system {dim}", o.dim())));
    }
    Ok(())
}

/// `M^z`, defaulting to the first generator.
fn element_matrix(s: &System, element: &Option<Vec<i64>>) -> Result<(Vec<i64>, RationalSquareMatrix), Failure> {
    let l = s.generators.len();
    let z = element.clone().unwrap_or_else(|| {
        let mut z = vec![0; l];
        z[0] = 1;
        z
    });
    if z.len() != l {
        return Err(Failure::Config(format!("element has {} entries, the action has rank {l}", z.len())));
    }
    if z.iter().all(|&x| x == 0) {
        return Err(Failure::Config("element must be nonzero".into()));
    }
    let m = action_matrix(&s.generators, &z)?;
    Ok((z, m))
}

fn fmt_c(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else {
        format!("{}{:+}i", c.re, c.im)
    }
}

pub fn analyze(c: AnalyzeConfig, st: &Settings) -> Outcome {
    let sys = resolve(&c.system)?;
    let a = &sys.algebra;
    let diagnostics = a.validate();
    let central: Vec<Value> = a
        .central_series()
        .iter()
        .map(|basis| {
            basis
                .iter()
                .map(|v| v.iter().map(rational_to_json).collect::<Value>())
                .collect()
        })
        .collect();
    let mut gens = Vec::new();
    let mut table = Csv::new(&["generator", "block", "exponent", "error", "multiplicity", "residual"]);
    let mut summary = vec![format!("system {} (dim {}, layers {:?})", sys.name, a.dim(), a.layers())];
    let mut bits = 0;
    for (k, g) in sys.generators.iter().enumerate() {
        let cls = classify(a, g)?;
        let split = match st.precision {
            Some(b) => lyapunov_data_at(g, b)?,
            None => cls.lyapunov.clone(),
        };
        bits = bits.max(split.bits);
        for (i, b) in split.blocks.iter().enumerate() {
            table.row([
                k.to_string(),
                i.to_string(),
                b.exponent.to_string(),
                b.error.to_string(),
                b.multiplicity.to_string(),
                b.residual.to_string(),
            ]);
        }
        summary.push(format!(
            "generator {k}: ergodic={} type={} dim n2={} exponents={:?}",
            cls.ergodic,
            val(&cls.kind).as_str().unwrap_or("?"),
            cls.n2.len(),
            split.exponents()
        ));
        gens.push(json!({ "classification": cls, "lyapunov": split }));
    }
    let mut result = json!({
        "diagnostics": diagnostics,
        "central_series": central,
        "generators": gens,
    });
    if sys.generators.len() > 1 {
        let fs = lyapunov_functionals(&sys.generators)?;
        let reg = find_regular_element(a, &sys.generators)?;
        summary.push(format!("regular element z={:?}", reg.z));
        result["functionals"] = val(&fs);
        result["regular_element"] = val(&reg);
    }
    Ok(Output {
        config: cfg(&c),
        system: Some(system_json(&sys)),
        result,
        tables: vec![("lyapunov.csv".into(), table.finish())],
        summary,
        bits: Some(bits),
    })
}

pub fn rates(c: RatesConfig, _st: &Settings) -> Outcome {
    let sys = resolve(&c.system)?;
    let (z, m) = element_matrix(&sys, &c.element)?;
    if c.s.is_empty() {
        return Err(Failure::Config("s must list at least one Hölder exponent".into()));
    }
    if c.envelope_max < 0 {
        return Err(Failure::Config("envelope_max must be nonnegative".into()));
    }
    let rep = rho_chi(&sys.algebra, &m)?;
    let mut gamma = Csv::new(&["s", "gamma", "rho0", "s0"]);
    let mut holder = Vec::new();
    for &s in &c.s {
        let h = holder_rate(&rep, s)?;
        gamma.row([s.to_string(), h.gamma.to_string(), h.rho0.to_string(), h.s0.to_string()]);
        holder.push(h);
    }
    let env = order2_envelope(&rep, c.r, c.eps)?;
    let mut envelope = Csv::new(&["m", "bound"]);
    for t in 0..=c.envelope_max {
        envelope.row([t.to_string(), env.bound(t, 1.0, 1.0).to_string()]);
    }
    let mut summary = vec![format!("rho={} chi={} delta={} rho0={}", rep.rho, rep.chi, rep.delta, rep.rho0)];
    summary.extend(holder.iter().map(|h| format!("gamma({})={}", h.s, h.gamma)));
    Ok(Output {
        config: cfg(&c),
        system: Some(system_json(&sys)),
        result: json!({ "element": z, "rates": rep, "holder": holder, "envelope": env }),
        tables: vec![("gamma.csv".into(), gamma.finish()), ("envelope.csv".into(), envelope.finish())],
        summary,
        bits: None,
    })
}

pub fn certify(c: CertifyConfig, _st: &Settings) -> Outcome {
    let sys = resolve(&c.system)?;
    if !(c.radius >= 1.0) || !c.radius.is_finite() {
        return Err(Failure::Config(format!("radius {} must be at least 1", c.radius)));
    }
    let mut table = Csv::new(&["label", "dim_e", "dim_v", "radius", "c_emp", "argmin", "passed", "exact"]);
    let mut summary = Vec::new();
    let mut passed = true;
    let mut lemma9 = Value::Null;
    if c.lemma9 {
        let (_, m) = element_matrix(&sys, &c.element)?;
        let rep = verify_lemma9(&m, c.radius)?;
        for s in &rep.subspaces {
            let k = &s.certificate;
            table.row([
                s.label.clone(),
                k.dim_e.to_string(),
                k.basis.len().to_string(),
                k.radius.to_string(),
                k.c_emp.to_string(),
                vector_field(&k.argmin),
                k.passed.to_string(),
                k.exact.to_string(),
            ]);
        }
        passed &= rep.passed;
        summary.push(format!("lemma 9 sweep over {} subspaces: passed={}", rep.subspaces.len(), rep.passed));
        lemma9 = val(&rep);
    }
    let mut explicit = Vec::new();
    for (i, d) in c.directions.iter().enumerate() {
        let label = d.label.clone().unwrap_or_else(|| format!("directions[{i}]"));
        let dim_e = d.vectors.first().map_or(0, |v| v.len());
        if dim_e == 0 || d.vectors.iter().any(|v| v.len() != dim_e) {
            return Err(Failure::Config(format!("{label}: vectors must be nonempty and of one length")));
        }
        let k = diophantine_certificate(&d.vectors, dim_e, c.radius, d.exact)?;
        table.row([
            label.clone(),
            k.dim_e.to_string(),
            k.basis.len().to_string(),
            k.radius.to_string(),
            k.c_emp.to_string(),
            vector_field(&k.argmin),
            k.passed.to_string(),
            k.exact.to_string(),
        ]);
        summary.push(format!("{label}: C_emp={} at {:?}", k.c_emp, k.argmin));
        passed &= k.passed;
        explicit.push(json!({ "label": label, "certificate": k }));
    }
    Ok(Output {
        config: cfg(&c),
        system: c.lemma9.then(|| system_json(&sys)),
        result: json!({ "passed": passed, "lemma9": lemma9, "directions": explicit }),
        tables: vec![("certificates.csv".into(), table.finish())],
        summary,
        bits: None,
    })
}

pub fn solve(c: SolveConfig, _st: &Settings) -> Outcome {
    let sys = resolve(&c.system)?;
    let f = observable(&c.observable, "observable")?;
    let (dirs, system) = match &c.directions {
        DirectionSource::Explicit(d) => {
            let v = if d.exact {
                Directions::from_rational(d.vectors.clone())
            } else {
                Directions::from_f64(
                    d.vectors
                        .iter()
                        .map(|v| v.iter().map(nilmix::exactlin::roots::approx_f64).collect())
                        .collect(),
                )
            };
            (v.map_err(|e| Failure::Config(format!("directions: {e}")))?, None)
        }
        src => {
            let cls = classify(&sys.algebra, &sys.generators[0])?;
            let w = match src {
                DirectionSource::Unstable => cls.lyapunov.w_plus,
                _ => cls.lyapunov.w_minus,
            };
            if w.is_empty() {
                return Err(Failure::Compute(nilmix::Error::NotErgodic));
            }
            (Directions::from_f64(w)?, Some(system_json(&sys)))
        }
    };
    check_dim(&f, dirs.dim(), "observable")?;
    let sol = solve_fractional(&f, &dirs, c.r, c.mode)?;
    let bound = if c.certificate_radius > 0.0 {
        let cert = certificate_f64(dirs.vectors(), dirs.dim(), c.certificate_radius)?;
        let b = small_divisor_bound(&f, &dirs, c.r, cert.c_emp, dirs.dim())?;
        json!({ "certificate": cert, "bound": b })
    } else {
        Value::Null
    };
    let d = f.dim();
    let mut header: Vec<String> = vec!["component".into()];
    header.extend((1..=d).map(|i| format!("z{i}")));
    header.extend(["re", "im"].map(String::from));
    let hdr: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut table = Csv::new(&hdr);
    for (i, comp) in sol.components.iter().enumerate() {
        for (z, v) in comp.iter() {
            let mut row = vec![i.to_string()];
            row.extend(z.iter().map(|x| x.to_string()));
            row.push(v.re.to_string());
            row.push(v.im.to_string());
            table.row(row);
        }
    }
    let mut summary = vec![format!(
        "r={} residual={:e} (max |f_z| {}) component norms {:?}",
        sol.r, sol.residual, sol.max_coeff, sol.norms
    )];
    summary.extend(sol.warnings.iter().cloned());
    let result = json!({
        "directions": dirs.vectors(),
        "residual": sol.residual,
        "residual_ok": sol.residual_ok(),
        "max_coeff": sol.max_coeff,
        "norms": sol.norms,
        "dropped_mean": sol.dropped_mean,
        "warnings": sol.warnings,
        "components": sol.components,
        "selector": sol.selector.iter().map(|(z, i)| json!({ "z": z, "index": i })).collect::<Vec<_>>(),
        "small_divisor": bound,
    });
    Ok(Output {
        config: cfg(&c),
        system,
        result,
        tables: vec![("solution.csv".into(), table.finish())],
        summary,
        bits: None,
    })
}

pub fn threshold(c: ThresholdConfig, st: &Settings) -> Outcome {
    if c.r.is_empty() || c.h.is_empty() {
        return Err(Failure::Config("r and h must be nonempty".into()));
    }
    if c.cells == 0 {
        return Err(Failure::Config("cells must be positive".into()));
    }
    let sampled = match &c.profile {
        ProfileSpec::Csv(path) => {
            let p = st.config_dir.join(path);
            let text = std::fs::read_to_string(&p)
                .map_err(|e| Failure::Config(format!("profile {}: {e}", p.display())))?;
            Some(SampledProfile::from_csv(&text).map_err(|e| Failure::Config(format!("profile {}: {e}", p.display())))?)
        }
        _ => None,
    };
    let xi = |x: f64| match &c.profile {
        ProfileSpec::Constant(k) => *k,
        ProfileSpec::Power(p) => x.abs().powf(*p),
        ProfileSpec::Csv(_) => sampled.as_ref().expect("loaded").eval(x),
    };
    let opts = ThresholdOptions {
        cells: c.cells,
        tolerance: c.tolerance,
    };
    let mut table = Csv::new(&["r", "h", "integral", "log_ratio", "refinement_error", "local_exponent", "verdict"]);
    let mut reports = Vec::new();
    let mut summary = Vec::new();
    for &r in &c.r {
        for &h in &c.h {
            let rep = schrodinger_threshold(&xi, r, h, &opts)?;
            let ratio = rep.integral / (1.0 / h).ln();
            let verdict = val(&rep.verdict).as_str().unwrap_or("?").to_string();
            table.row([
                r.to_string(),
                h.to_string(),
                rep.integral.to_string(),
                ratio.to_string(),
                rep.refinement_error.to_string(),
                rep.local_exponent.to_string(),
                verdict.clone(),
            ]);
            summary.push(format!("r={r} h={h}: I={} ({verdict})", rep.integral));
            reports.push(rep);
        }
    }
    Ok(Output {
        config: cfg(&c),
        system: None,
        result: json!({ "sweep": reports }),
        tables: vec![("threshold.csv".into(), table.finish())],
        summary,
        bits: None,
    })
}

fn times_of(spec: &TimeSpec, n: usize, rank: usize) -> Result<Vec<Vec<Vec<i64>>>, Failure> {
    let tuples = match spec {
        TimeSpec::Range {
            from,
            to,
            pattern,
            direction,
        } => {
            if pattern.len() != n {
                return Err(Failure::Config(format!("times.range.pattern has {} entries for {n} observables", pattern.len())));
            }
            if from > to {
                return Err(Failure::Config("times.range needs from <= to".into()));
            }
            let dir = direction.clone().unwrap_or_else(|| {
                let mut d = vec![0; rank];
                d[0] = 1;
                d
            });
            (*from..=*to)
                .map(|m| pattern.iter().map(|p| dir.iter().map(|d| p * m * d).collect()).collect())
                .collect()
        }
        TimeSpec::Tuples(t) => t.clone(),
    };
    for (i, t) in tuples.iter().enumerate() {
        if t.len() != n {
            return Err(Failure::Config(format!("time tuple {i} has {} times for {n} observables", t.len())));
        }
        if t.iter().any(|z| z.len() != rank) {
            return Err(Failure::Config(format!("time tuple {i}: every time needs {rank} coordinates")));
        }
    }
    if tuples.is_empty() {
        return Err(Failure::Config("no time tuples".into()));
    }
    Ok(tuples)
}

fn fit_series(series: &mut CorrelationSeries, fit: &Option<FitSpec>, sys: &System, summary: &mut Vec<String>) -> Value {
    let Some(spec) = fit else { return Value::Null };
    let rate = match spec.rate {
        Some(r) => r,
        None => match rho_chi(&sys.algebra, &sys.generators[0]) {
            Ok(r) => r.chi,
            Err(e) => return json!({ "error": e.to_string() }),
        },
    };
    let pts = match spec.against {
        FitAxis::Gap => series.by_gap(),
        FitAxis::Maxgap => series.by_max_gap(),
    };
    match decay_fit(&pts, rate) {
        Ok(f) => {
            summary.push(format!(
                "fit: slope={} r2={} C={} envelope(rate {})={}",
                f.slope, f.r2, f.c, f.rate, f.envelope_satisfied
            ));
            series.fit = Some(f.clone());
            val(&f)
        }
        Err(e) => {
            summary.push(format!("fit skipped: {e}"));
            json!({ "error": e.to_string() })
        }
    }
}

pub fn correlate(c: CorrelateConfig, _st: &Settings) -> Outcome {
    let sys = resolve(&c.system)?;
    let n = c.observables.len();
    if n < 2 {
        return Err(Failure::Config("correlate needs at least two observables".into()));
    }
    let mut fs = Vec::new();
    for (i, o) in c.observables.iter().enumerate() {
        let f = observable(o, &format!("observables[{i}]"))?;
        check_dim(&f, sys.algebra.dim(), &format!("observables[{i}]"))?;
        fs.push(f);
    }
    let action = IntegerAction::new(&sys.generators)?;
    let tuples = times_of(&c.times, n, action.rank())?;
    let mut series = CorrelationSeries::default();
    for t in tuples {
        let v = correlate::correlation_n(&fs, &action, &t, c.budget as u128)?;
        series.push(t, v);
    }
    let mut summary = vec![format!("{} tuples of {n} times", series.entries.len())];
    let fit = fit_series(&mut series, &c.fit, &sys, &mut summary);
    Ok(Output {
        config: cfg(&c),
        system: Some(system_json(&sys)),
        result: json!({ "entries": series.entries, "fit": fit }),
        tables: vec![("series.csv".into(), series.to_csv())],
        summary,
        bits: None,
    })
}

pub fn density(c: DensityConfig, st: &Settings) -> Outcome {
    let sys = resolve(&c.system)?;
    if c.radius.is_empty() {
        return Err(Failure::Config("radius must list at least one value".into()));
    }
    let opts = DensityOptions {
        samples: c.samples,
        seed: st.seed,
    };
    let mut table = Csv::new(&["radius", "total", "regular_fraction", "tame_fraction", "delta", "hyperplanes"]);
    let mut reports = Vec::new();
    let mut summary = Vec::new();
    for &r in &c.radius {
        let rep = density_estimate(&sys.generators, c.n, r, c.eps, &opts)?;
        table.row([
            r.to_string(),
            rep.total.to_string(),
            rep.regular_fraction.to_string(),
            rep.tame_fraction.to_string(),
            rep.delta.to_string(),
            rep.hyperplanes.to_string(),
        ]);
        summary.push(format!("R={r}: regular {} tame {}", rep.regular_fraction, rep.tame_fraction));
        reports.push(rep);
    }
    Ok(Output {
        config: cfg(&c),
        system: Some(system_json(&sys)),
        result: json!({ "estimates": reports }),
        tables: vec![("density.csv".into(), table.finish())],
        summary,
        bits: None,
    })
}

pub fn counterexample(c: CounterexampleConfig, _st: &Settings) -> Outcome {
    let config = cfg(&c);
    match c {
        CounterexampleConfig::Maxgap {
            system,
            f1,
            f2,
            n,
            from,
            to,
            budget,
        } => {
            let sys = resolve(&system)?;
            if sys.generators.len() != 1 {
                return Err(Failure::Config("the max-gap demo needs a single automorphism".into()));
            }
            let (f1, f2) = (observable(&f1, "f1")?, observable(&f2, "f2")?);
            check_dim(&f1, sys.algebra.dim(), "f1")?;
            check_dim(&f2, sys.algebra.dim(), "f2")?;
            let ms: Vec<i64> = (from..=to).collect();
            let r = correlate::counterexample_maxgap(&f1, &f2, n, &sys.generators[0], &ms, budget as u128)?;
            let summary = vec![
                format!("c = {}, limit c ∫f1² = {}", fmt_c(r.c), fmt_c(r.limit)),
                format!(
                    "value at m={to}: {}",
                    r.series.entries.last().map_or("-".into(), |e| fmt_c(e.value()))
                ),
            ];
            Ok(Output {
                config,
                system: Some(system_json(&sys)),
                tables: vec![("series.csv".into(), r.series.to_csv())],
                result: val(&r),
                summary,
                bits: None,
            })
        }
        CounterexampleConfig::NoUniformBound { g, from, to, budget } => {
            let g = observable(&g, "g")?;
            let ms: Vec<i64> = (from..=to).collect();
            let s = correlate::no_uniform_bound_demo(&g, &ms, budget as u128)?;
            let constant = s.entries.windows(2).all(|w| w[0].value() == w[1].value());
            let summary = vec![format!(
                "‖g‖² = {}, series constant: {constant}",
                g.l2_norm_sqr()
            )];
            Ok(Output {
                config,
                system: Some(system_json(&nilmix::catalog::system("product-t2xt2")?)),
                tables: vec![("series.csv".into(), s.to_csv())],
                result: json!({ "norm_sqr": g.l2_norm_sqr(), "constant": constant, "entries": s.entries }),
                summary,
                bits: None,
            })
        }
    }
}

pub fn config_dir(path: &Path) -> std::path::PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}
