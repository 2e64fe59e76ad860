use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Result};
use secure_isac::dmc::{self, DmcRegionPoint, DmcSearchConfig};
use secure_isac::files::{self, ScenarioFile};
use secure_isac::fme::{self, LinIneqSystem, SchemeInfo};
use secure_isac::gauss::{self, GaussEvaluation, RegionPoint, ScenarioConfig, SearchConfig};
use secure_isac::region::nats_to_bits;
use secure_isac::sim::{self, SimConfig};
use secure_isac::{Error, SecrecyMode};

use crate::output::{emit, num, Csv};
use crate::{DmcEvalArgs, DmcSearchArgs, FmeArgs, GaussEvalArgs, GaussFrontierArgs, SimulateArgs};

pub const EXIT_INPUT: u8 = 2;
pub const EXIT_INFEASIBLE: u8 = 3;
pub const EXIT_CAP: u8 = 4;

pub fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::CapExceeded { .. }) => EXIT_CAP,
        Some(Error::Infeasible(_)) => EXIT_INFEASIBLE,
        Some(_) => EXIT_INPUT,
        None => 1,
    }
}

/// `None` stands for every mode.
fn parse_mode(s: &str) -> Result<Option<SecrecyMode>> {
    if s == "all" {
        return Ok(None);
    }
    s.parse::<SecrecyMode>()
        .map(Some)
        .map_err(|e| Error::InvalidParameter(e).into())
}

fn load_scenario(path: &Path) -> Result<ScenarioFile> {
    let text = files::read_text(path)?;
    Ok(files::parse_scenario(&text, &path.display().to_string())?)
}

fn load_gaussian(path: &Path) -> Result<ScenarioConfig> {
    match load_scenario(path)? {
        ScenarioFile::Gaussian(c) => Ok(c),
        other => Err(Error::InvalidFile {
            source_name: path.display().to_string(),
            detail: format!("expected kind \"gaussian\", got \"{}\"", other.kind()),
        }
        .into()),
    }
}

fn load_dmc(path: &Path) -> Result<dmc::DmcScenario> {
    match load_scenario(path)? {
        ScenarioFile::Dmc(d) => Ok(d),
        other => Err(Error::InvalidFile {
            source_name: path.display().to_string(),
            detail: format!("expected kind \"dmc\", got \"{}\"", other.kind()),
        }
        .into()),
    }
}

const FRONTIER_HEADER: [&str; 12] = [
    "mode", "D", "R_M_nats", "R_M_bits", "sigma_T2", "sigma_F2", "sigma_G2", "delta", "alpha", "epsilon",
    "gamma", "power_used",
];

fn frontier_row(p: &RegionPoint) -> Vec<String> {
    let a = &p.params;
    vec![
        p.mode.to_string(),
        num(p.distortion),
        num(p.rate),
        num(nats_to_bits(p.rate)),
        num(a.sigma_t2),
        num(a.sigma_f2),
        num(a.sigma_g2),
        num(a.delta),
        num(a.alpha),
        num(a.epsilon),
        num(a.gamma),
        num(p.power_used),
    ]
}

pub fn gauss_frontier(a: GaussFrontierArgs, seed: Option<u64>) -> Result<u8> {
    let cfg = load_gaussian(&a.scenario)?;
    let mode = match &a.mode {
        Some(m) => parse_mode(m)?,
        None => Some(cfg.mode),
    };
    if a.budget == 0 {
        bail!(Error::InvalidParameter("budget must be at least 1".into()));
    }
    let search = SearchConfig {
        budget: a.budget,
        seed: seed.unwrap_or(0),
        targets: a.targets.max(1),
        ..Default::default()
    };
    let results = match mode {
        Some(m) => vec![(m, gauss::frontier(&cfg.clone().with_mode(m), &search)?)],
        None => gauss::nested_frontiers(&cfg, &search)?,
    };
    let mut rows: Vec<&RegionPoint> = results.iter().flat_map(|(_, r)| r.points.iter()).collect();
    // Stable: ties in D keep mode order.
    rows.sort_by(|x, y| x.distortion.total_cmp(&y.distortion));
    let mut csv = Csv::new(&FRONTIER_HEADER);
    for p in &rows {
        csv.row(&frontier_row(p));
    }
    emit(a.output.as_deref(), &csv.into_bytes())?;
    let mut code = 0;
    for (m, r) in &results {
        if r.points.is_empty() {
            eprintln!("{m}: no feasible point in {} evaluations", r.evaluations);
            code = EXIT_INFEASIBLE;
            continue;
        }
        let max_r = r.points.iter().map(|p| p.rate).fold(0.0, f64::max);
        eprintln!(
            "{m}: {} points, {} evaluations ({} infeasible), min D = {:.6}, max R_M = {:.6} nats ({:.6} bits)",
            r.points.len(),
            r.evaluations,
            r.infeasible,
            r.points[0].distortion,
            max_r,
            nats_to_bits(max_r)
        );
    }
    Ok(code)
}

fn terms_report(out: &mut String, named: &[(&str, f64)]) {
    out.push_str("terms (nats):\n");
    for (name, v) in named {
        let _ = writeln!(out, "  {name:<14} = {v:.9}");
    }
}

fn gauss_report(e: &GaussEvaluation, budget: f64) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "mode: {}", e.mode);
    let _ = writeln!(out, "R_M = {:.9} nats ({:.9} bits)", e.rate(), nats_to_bits(e.rate()));
    let _ = writeln!(out, "D = {:.9}", e.distortion);
    let _ = writeln!(out, "power_used = {:.9} (P = {budget})", e.power_used);
    terms_report(&mut out, &e.terms.named());
    out.push_str("bounds (nats):\n");
    for c in &e.bound.constraints {
        let _ = writeln!(out, "  {:<44} = {:.9}  slack {:.9}", c.name, c.bound, c.slack);
    }
    let _ = writeln!(out, "I(U;Y) >= I(U;S): {}", e.bound.filter_ok);
    match e.independence {
        Some(ind) => {
            let _ = writeln!(out, "independence residual max|cov(Xi; U,Z)| = {:.3e}", ind.max_abs_cross_cov);
        }
        None => out.push_str("independence residual: n/a (Xi constant or not secret)\n"),
    }
    match &e.infeasibility {
        None => out.push_str("feasible: yes\n"),
        Some(why) => {
            let _ = writeln!(out, "feasible: no ({why})");
        }
    }
    out
}

pub fn gauss_eval(a: GaussEvalArgs) -> Result<u8> {
    let mut cfg = load_gaussian(&a.scenario)?;
    if let Some(m) = &a.mode {
        cfg.mode = parse_mode(m)?.ok_or_else(|| Error::InvalidParameter("gauss-eval takes a single mode".into()))?;
    }
    let text = files::read_text(&a.params)?;
    let params = files::parse_params(&text, &a.params.display().to_string())?;
    let e = gauss::evaluate(&cfg, &params)?;
    emit(a.output.as_deref(), gauss_report(&e, cfg.power).as_bytes())?;
    Ok(if e.feasible { 0 } else { EXIT_INFEASIBLE })
}

fn dmc_report(p: &DmcRegionPoint) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "mode: {}", p.mode);
    let _ = writeln!(out, "R_M = {:.9} nats ({:.9} bits)", p.rate, nats_to_bits(p.rate));
    let _ = writeln!(out, "D = {:.9}", p.distortion);
    terms_report(&mut out, &p.terms.named());
    out.push_str("bounds (nats):\n");
    for c in &p.bound.constraints {
        let _ = writeln!(out, "  {:<44} = {:.9}  slack {:.9}", c.name, c.bound, c.slack);
    }
    let _ = writeln!(
        out,
        "eliminated bounds: I(U,V;Y)-I(U,V;S) = {:.9}, I(V;Y|U)-I(V;Xi,Z|U) = {:.9}, I(U,V;Y)-I(U;S)-I(V;Xi,Z|U) = {:.9}",
        p.eliminated.gp, p.eliminated.secrecy, p.eliminated.joint
    );
    let _ = writeln!(out, "I(U;Y) >= I(U;S): {}", p.bound.filter_ok);
    let _ = writeln!(out, "independence residual I(Xi;U,Z) = {:.3e}", p.residual);
    let _ = writeln!(out, "estimator g[u][v][y] = {:?}", p.g.map);
    match &p.infeasibility {
        None => out.push_str("feasible: yes\n"),
        Some(why) => {
            let _ = writeln!(out, "feasible: no ({why})");
        }
    }
    out
}

pub fn dmc_eval(a: DmcEvalArgs) -> Result<u8> {
    let sc = load_dmc(&a.scenario)?;
    let mode = match &a.mode {
        Some(m) => parse_mode(m)?.ok_or_else(|| Error::InvalidParameter("dmc-eval takes a single mode".into()))?,
        None => SecrecyMode::MessageAndState,
    };
    let text = files::read_text(&a.aux)?;
    let aux = files::parse_aux(&text, &a.aux.display().to_string(), &sc)?;
    let p = dmc::eval_region(&sc, &aux, mode)?;
    emit(a.output.as_deref(), dmc_report(&p).as_bytes())?;
    Ok(if p.feasible { 0 } else { EXIT_INFEASIBLE })
}

pub fn dmc_search(a: DmcSearchArgs, seed: Option<u64>) -> Result<u8> {
    let sc = load_dmc(&a.scenario)?;
    let mode = parse_mode(&a.mode)?;
    if a.u == 0 || a.v == 0 {
        bail!(Error::InvalidParameter("--u and --v must be at least 1".into()));
    }
    let cfg = DmcSearchConfig {
        budget: a.budget,
        seed: seed.unwrap_or(0),
        u: a.u,
        v: a.v,
        targets: a.targets.max(1),
        ..Default::default()
    };
    let results = match mode {
        Some(m) => vec![(m, dmc::search_aux(&sc, m, &cfg)?)],
        None => dmc::nested_search(&sc, &cfg)?,
    };
    let mut rows: Vec<&DmcRegionPoint> = results.iter().flat_map(|(_, f)| f.points.iter()).collect();
    rows.sort_by(|x, y| x.distortion.total_cmp(&y.distortion));
    let mut csv = Csv::new(&["mode", "D", "R_M_nats", "R_M_bits", "independence_residual"]);
    for p in &rows {
        csv.row(&[p.mode.to_string(), num(p.distortion), num(p.rate), num(nats_to_bits(p.rate)), num(p.residual)]);
    }
    emit(a.output.as_deref(), &csv.into_bytes())?;
    if let Some(path) = &a.aux_output {
        let doc: Vec<serde_json::Value> = rows
            .iter()
            .map(|p| {
                serde_json::json!({
                    "mode": p.mode,
                    "D": p.distortion,
                    "R_M_nats": p.rate,
                    "aux": p.aux,
                })
            })
            .collect();
        let mut text = serde_json::to_string_pretty(&doc)?;
        text.push('\n');
        emit(Some(path), text.as_bytes())?;
    }
    let mut code = 0;
    for (m, f) in &results {
        if f.points.is_empty() {
            eprintln!("{m}: no feasible channel in {} evaluations", f.evaluations);
            code = EXIT_INFEASIBLE;
            continue;
        }
        let max_r = f.points.iter().map(|p| p.rate).fold(0.0, f64::max);
        eprintln!(
            "{m}: {} points, {} evaluations ({} infeasible), min D = {:.6}, max R_M = {:.6} nats",
            f.points.len(),
            f.evaluations,
            f.infeasible,
            f.points[0].distortion,
            max_r
        );
    }
    Ok(code)
}

fn eliminate_in_order(sys: &LinIneqSystem, order: &[String]) -> Result<LinIneqSystem> {
    let names: Vec<&str> = order.iter().map(String::as_str).collect();
    Ok(fme::eliminate_all(sys, &names)?)
}

pub fn fme(a: FmeArgs) -> Result<u8> {
    let mut out = String::new();
    if let Some(v) = &a.scheme {
        let mi = SchemeInfo::from_array([v[0], v[1], v[2], v[3], v[4]]);
        let order = a.eliminate.clone().unwrap_or_else(|| vec!["R_I".into(), "R_J".into()]);
        let names: Vec<&str> = order.iter().map(String::as_str).collect();
        let p = fme::project_scheme_rates_in_order(&mi, &names)?;
        let [c1, c2, c3] = p.closed_forms;
        let _ = writeln!(out, "closed forms (nats):");
        let _ = writeln!(out, "  I(U,V;Y) - I(U,V;S)              = {c1}");
        let _ = writeln!(out, "  I(V;Y|U) - I(V;Xi,Z|U)           = {c2}");
        let _ = writeln!(out, "  I(U,V;Y) - I(U;S) - I(V;Xi,Z|U)  = {c3}");
        let _ = writeln!(out, "min closed form = {}", c1.min(c2).min(c3));
        let _ = writeln!(out, "FME bound on R_M = {} ({} bits)", p.bound, nats_to_bits(p.bound));
        let _ = writeln!(out, "feasible: {}", p.feasible);
        let _ = writeln!(out, "projected system:");
        let _ = write!(out, "{}", p.system);
    } else if let Some(path) = &a.file {
        let text = files::read_text(path)?;
        let sys = fme::parse_system(&text)?;
        let order = match &a.eliminate {
            Some(o) => o.clone(),
            None => ["R_I", "R_J"]
                .iter()
                .filter(|v| sys.vars().iter().any(|x| x == *v))
                .map(|v| v.to_string())
                .collect(),
        };
        let projected = eliminate_in_order(&sys, &order)?;
        let _ = writeln!(out, "eliminated: {}", if order.is_empty() { "(none)".into() } else { order.join(", ") });
        let _ = writeln!(out, "rows: {}", projected.rows().len());
        let _ = write!(out, "{projected}");
        if projected.is_trivially_infeasible() {
            out.push_str("system is infeasible\n");
        }
    }
    emit(a.output.as_deref(), out.as_bytes())?;
    Ok(0)
}

const SIM_HEADER: [&str; 12] = [
    "n",
    "Pe",
    "Pe_ci",
    "distortion",
    "leakage_nats_per_symbol",
    "leakage_method",
    "Pe_ci_low",
    "Pe_ci_high",
    "distortion_ci",
    "leakage_ci",
    "trials",
    "codewords",
];

pub fn simulate(a: SimulateArgs, seed: Option<u64>) -> Result<u8> {
    let text = files::read_text(&a.experiment)?;
    let mut exp = files::parse_experiment(&text, &a.experiment.display().to_string())?;
    if let Some(t) = a.trials {
        if t == 0 {
            bail!(Error::InvalidParameter("trials must be at least 1".into()));
        }
        exp.config.trials = t;
    }
    if let Some(s) = seed {
        exp.config.seed = s;
    }
    let model = sim::SchemeModel::new(&exp.scenario, &exp.aux)?;
    let mut results = Vec::new();
    for n in exp.blocklengths() {
        let cfg = SimConfig { n, ..exp.config.clone() };
        results.push(sim::run_with_model(&model, &cfg)?);
    }
    let mut csv = Csv::new(&SIM_HEADER);
    let opt = |x: Option<f64>| x.map(num).unwrap_or_else(|| "NA".into());
    for r in &results {
        let s = r.sizes;
        csv.row(&[
            r.n.to_string(),
            num(r.pe),
            num(r.pe_half_width),
            num(r.distortion),
            opt(r.leakage),
            r.leakage_method.clone(),
            num(r.pe_ci.0),
            num(r.pe_ci.1),
            num(r.distortion_half_width),
            opt(r.leakage_half_width),
            r.trials.to_string(),
            format!("{}x{}x{}", s.n_i, s.n_m, s.n_j),
        ]);
    }
    emit(a.output.as_deref(), &csv.into_bytes())?;
    let report = serde_json::json!({
        "experiment": a.experiment.display().to_string(),
        "config": exp.config,
        "single_letter_distortion": model.expected_distortion,
        "note": "desk-scale blocklengths: results show trends and orderings, not asymptotic guarantees",
        "results": results,
    });
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    match &a.report {
        Some(p) => emit(Some(p), text.as_bytes())?,
        None => eprint!("{text}"),
    }
    Ok(0)
}
