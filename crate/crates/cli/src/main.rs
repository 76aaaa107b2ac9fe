//! Command-line front end: load curve specs, run the Frenet and pair
//! computations, emit CSV/JSON reports.
//!
//! Exit codes: 0 all checks pass, 1 checks failed, 2 config/parse error,
//! 3 geometric error.

use clap::{Args, Parser, Subcommand};
use mannheim_core::curves::{
    arclength_map, ArcLengthMap, Curve, CurveError, CurveSpec, MonotoneMap,
};
use mannheim_core::frenet::{frenet_apparatus, frenet_residual, FrenetError};
use mannheim_core::lorentz::{set_signature, Signature};
use mannheim_core::mannheim::{
    check_constancy_quotient, check_helix_line_characterization, construct_partner_curve, pair_from_curves, pair_samples,
    partner_torsion, wm_validate, CaseId, MannheimPair, PairError,
};
use mannheim_core::report::{build_pair_report, serialize, serialize_wm, Tolerances};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

const EXIT_OK: u8 = 0;
const EXIT_CHECKS_FAILED: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_GEOMETRY: u8 = 3;

#[derive(Parser)]
#[command(
    name = "mannheim",
    about = "Frenet apparatus and Mannheim-pair verification for non-null curves in Minkowski 3-space",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Number of evaluation samples (>= 7).
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Tolerance override, repeatable: --tol identity=1e-6
    #[arg(long, value_parser = parse_tol)]
    tol: Vec<(String, f64)>,
    /// Metric signature: ppm = (+,+,-), mpp = (-,+,+).
    #[arg(long, default_value = "ppm")]
    signature: String,
    /// Output format: csv or json.
    #[arg(long, default_value = "csv")]
    format: String,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Per-sample Frenet data and Frenet-equation residuals of one curve.
    Frenet {
        /// Curve spec (JSON).
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Construct the binormal-offset partner of a curve and check every
    /// pair identity.
    Partner {
        /// Conjugate curve spec (JSON).
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
        /// Expected sign mu with B~ = mu N (measured when omitted).
        #[arg(long, allow_negative_numbers = true)]
        mu: Option<f64>,
        /// Write the constructed curve as a sampled-curve spec.
        #[arg(long)]
        emit_curve: Option<PathBuf>,
        /// Write the parameter correspondence [[t, t~], ...].
        #[arg(long)]
        emit_correspondence: Option<PathBuf>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Verify a given pair of curves against the pair identities.
    Verify {
        /// Curve spec of the Mannheim curve (JSON).
        #[arg(long)]
        spec: PathBuf,
        /// Curve spec of the conjugate (JSON).
        #[arg(long)]
        partner_spec: PathBuf,
        /// Correspondence file {"correspondence": [[t, t~], ...]};
        /// arc-length matching from the domain starts when omitted.
        #[arg(long)]
        correspondence: Option<PathBuf>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Weakened-pair validation: orthogonality plus Z/N degenerate-set
    /// estimates.
    WmCheck {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        partner_spec: PathBuf,
        #[arg(long)]
        correspondence: Option<PathBuf>,
        /// Threshold on |ds*/ds| (and its inverse) for the Z/N sets.
        #[arg(long, default_value_t = 1e-6)]
        tol_zero: f64,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Sweep the offset lambda and report formula degeneration and
    /// constructability per offset.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        lambda_min: f64,
        #[arg(long, allow_negative_numbers = true)]
        lambda_max: f64,
        #[arg(long)]
        lambda_steps: usize,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        mu: f64,
        /// Case id (1-5) for the torsion formula; inferred from the curve's
        /// causal signs when omitted.
        #[arg(long)]
        case: Option<u8>,
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    let v: f64 = value.parse().map_err(|e| format!("bad value: {e}"))?;
    Ok((name.to_string(), v))
}

enum CmdError {
    Config(String),
    Geometry(String),
}

impl From<CurveError> for CmdError {
    fn from(e: CurveError) -> Self {
        match e {
            CurveError::UnknownFamily(_)
            | CurveError::BadParams { .. }
            | CurveError::TooFewSamples(_)
            | CurveError::NotIncreasing
            | CurveError::BadSpec(_)
            | CurveError::OrderUnavailable { .. } => CmdError::Config(e.to_string()),
            _ => CmdError::Geometry(e.to_string()),
        }
    }
}

impl From<FrenetError> for CmdError {
    fn from(e: FrenetError) -> Self {
        match e {
            FrenetError::Curve(c) => c.into(),
            _ => CmdError::Geometry(e.to_string()),
        }
    }
}

impl From<PairError> for CmdError {
    fn from(e: PairError) -> Self {
        match e {
            PairError::Curve(c) => c.into(),
            PairError::Frenet(f) => f.into(),
            PairError::ZeroLambda | PairError::EmptyReport => CmdError::Config(e.to_string()),
            _ => CmdError::Geometry(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(all_pass) => {
            if all_pass {
                EXIT_OK
            } else {
                EXIT_CHECKS_FAILED
            }
        }
        Err(CmdError::Config(msg)) => {
            eprintln!("error (config): {msg}");
            EXIT_CONFIG
        }
        Err(CmdError::Geometry(msg)) => {
            eprintln!("error (geometry): {msg}");
            EXIT_GEOMETRY
        }
    };
    ExitCode::from(code)
}

fn setup(common: &CommonOpts) -> Result<(Tolerances, Signature), CmdError> {
    if common.samples < 7 {
        return Err(CmdError::Config(format!(
            "--samples must be at least 7, got {}",
            common.samples
        )));
    }
    let mut tol = Tolerances::default();
    for (name, value) in &common.tol {
        if *value <= 0.0 {
            return Err(CmdError::Config(format!("tolerance {name} must be positive")));
        }
        tol.set(name, *value);
    }
    let sig = match common.signature.as_str() {
        "ppm" => Signature::Ppm,
        "mpp" => Signature::Mpp,
        other => {
            return Err(CmdError::Config(format!(
                "unknown signature `{other}` (expected ppm or mpp)"
            )))
        }
    };
    set_signature(sig);
    Ok((tol, sig))
}

fn load_curve(path: &PathBuf, sig: Signature) -> Result<(CurveSpec, Arc<dyn Curve>), CmdError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CmdError::Config(format!("{}: {e}", path.display())))?;
    let spec = CurveSpec::from_json(&text)?;
    let curve = spec.build(sig)?;
    Ok((spec, curve))
}

fn write_output(out: &Option<PathBuf>, bytes: &[u8]) -> Result<(), CmdError> {
    match out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| CmdError::Config(format!("{}: {e}", path.display()))),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(bytes)
                .map_err(|e| CmdError::Config(e.to_string()))
        }
    }
}

fn run(cli: Cli) -> Result<bool, CmdError> {
    match cli.command {
        Command::Frenet { spec, common } => cmd_frenet(&spec, &common),
        Command::Partner {
            spec,
            lambda,
            mu,
            emit_curve,
            emit_correspondence,
            common,
        } => cmd_partner(&spec, lambda, mu, emit_curve, emit_correspondence, &common),
        Command::Verify {
            spec,
            partner_spec,
            correspondence,
            common,
        } => cmd_verify(&spec, &partner_spec, correspondence, &common),
        Command::WmCheck {
            spec,
            partner_spec,
            correspondence,
            tol_zero,
            common,
        } => cmd_wm_check(&spec, &partner_spec, correspondence, tol_zero, &common),
        Command::Sweep {
            spec,
            lambda_min,
            lambda_max,
            lambda_steps,
            mu,
            case,
            common,
        } => cmd_sweep(&spec, lambda_min, lambda_max, lambda_steps, mu, case, &common),
    }
}

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

fn cmd_frenet(spec_path: &PathBuf, common: &CommonOpts) -> Result<bool, CmdError> {
    let (tol, sig) = setup(common)?;
    let (_, curve) = load_curve(spec_path, sig)?;
    let map = arclength_map(curve.as_ref(), curve.domain(), 1e-10)?;
    let n = common.samples;
    let tol_frenet = tol.get("frenet");
    let mut all_pass = true;
    let mut out = String::new();
    out.push_str("# mannheim frenet\n");
    out.push_str(
        "s,T1,T2,T3,N1,N2,N3,B1,B2,B3,kappa,tau,eps1,eps2,res_T,res_N,res_B\n",
    );
    for i in 0..n {
        let s = map.total * (i as f64 + 0.5) / n as f64;
        let f = frenet_apparatus(curve.as_ref(), &map, s)?;
        let (rt, rn, rb) = frenet_residual(curve.as_ref(), &map, s)?;
        if rt.max(rn).max(rb) >= tol_frenet {
            all_pass = false;
        }
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            fmt17(s),
            fmt17(f.tangent.x1),
            fmt17(f.tangent.x2),
            fmt17(f.tangent.x3),
            fmt17(f.normal.x1),
            fmt17(f.normal.x2),
            fmt17(f.normal.x3),
            fmt17(f.binormal.x1),
            fmt17(f.binormal.x2),
            fmt17(f.binormal.x3),
            fmt17(f.kappa),
            fmt17(f.tau),
            f.eps1 as i8,
            f.eps2 as i8,
            fmt17(rt),
            fmt17(rn),
            fmt17(rb)
        );
    }
    write_output(&common.out, out.as_bytes())?;
    Ok(all_pass)
}

fn emit_pair_artifacts(
    pair: &MannheimPair,
    emit_curve: &Option<PathBuf>,
    emit_correspondence: &Option<PathBuf>,
) -> Result<(), CmdError> {
    let (t0, t1) = pair.gt.domain();
    // spacing balances stencil truncation against roundoff in the third
    // derivative when the emitted curve is re-read as a sampled spec
    let n = 512usize;
    if let Some(path) = emit_curve {
        let mut samples = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let t = t0 + (t1 - t0) * i as f64 / n as f64;
            let p = mannheim_core::curves::position(pair.g.as_ref(), t)?;
            samples.push([t, p.x1, p.x2, p.x3]);
        }
        let spec = CurveSpec::Sampled { samples };
        let text = serde_json::to_string(&spec).expect("spec serializes");
        std::fs::write(path, text).map_err(|e| CmdError::Config(e.to_string()))?;
    }
    if let Some(path) = emit_correspondence {
        // denser than the curve samples: the verifier differentiates it
        let nc = 4096usize;
        let mut pairs = Vec::with_capacity(nc + 1);
        for i in 0..=nc {
            let t = t0 + (t1 - t0) * i as f64 / nc as f64;
            pairs.push([t, t]);
        }
        let text = serde_json::to_string(&serde_json::json!({ "correspondence": pairs }))
            .expect("correspondence serializes");
        std::fs::write(path, text).map_err(|e| CmdError::Config(e.to_string()))?;
    }
    Ok(())
}

fn cmd_partner(
    spec_path: &PathBuf,
    lambda: f64,
    mu: Option<f64>,
    emit_curve: Option<PathBuf>,
    emit_correspondence: Option<PathBuf>,
    common: &CommonOpts,
) -> Result<bool, CmdError> {
    let (tol, sig) = setup(common)?;
    if lambda == 0.0 {
        return Err(CmdError::Config("--lambda must be nonzero".to_string()));
    }
    let (_, gt) = load_curve(spec_path, sig)?;
    let pair = construct_partner_curve(gt, lambda, mu)?;
    emit_pair_artifacts(&pair, &emit_curve, &emit_correspondence)?;
    let rows = pair_samples(&pair, common.samples)?;
    let mut report = build_pair_report(&pair, rows, &tol)?;
    attach_constancy(&pair, &mut report, &tol)?;
    let bytes = render_pair_report(&report, &common.format)?;
    write_output(&common.out, &bytes)?;
    Ok(report.all_pass())
}

fn attach_constancy(
    pair: &MannheimPair,
    report: &mut mannheim_core::report::PairReport,
    tol: &Tolerances,
) -> Result<(), CmdError> {
    let r1 = check_constancy_quotient(pair, report.meta.samples.max(7), tol.get("constancy"))?;
    report.verdicts.push(mannheim_core::report::Verdict {
        name: "constancy_quotient".to_string(),
        tolerance: tol.get("constancy"),
        max_residual: r1.max_deviation,
        mean_residual: r1.mean,
        pass: r1.pass,
        samples: r1.values.len(),
    });
    Ok(())
}

fn render_pair_report(
    report: &mannheim_core::report::PairReport,
    format: &str,
) -> Result<Vec<u8>, CmdError> {
    let body = serialize(report, format).map_err(|e| CmdError::Config(e.to_string()))?;
    if format == "csv" {
        let mut out = String::new();
        out.push_str("# mannheim pair report\n");
        let _ = writeln!(
            out,
            "# case={} lambda={} mu={} binormal_sign={} admissibility={}",
            report.meta.case_id,
            fmt17(report.meta.lambda),
            report.meta.mu,
            report.meta.binormal_sign,
            fmt17(report.meta.admissibility),
        );
        for v in &report.verdicts {
            let _ = writeln!(
                out,
                "# verdict {} pass={} max={} tol={}",
                v.name,
                v.pass,
                fmt17(v.max_residual),
                fmt17(v.tolerance)
            );
        }
        for f in &report.findings {
            let _ = writeln!(out, "# finding {f}");
        }
        let mut bytes = out.into_bytes();
        bytes.extend_from_slice(&body);
        Ok(bytes)
    } else {
        Ok(body)
    }
}

fn load_correspondence(
    path: &PathBuf,
    g: &dyn Curve,
    g_map: &ArcLengthMap,
    gt_map: &ArcLengthMap,
) -> Result<MonotoneMap, CmdError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CmdError::Config(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CmdError::Config(e.to_string()))?;
    let pairs = value
        .get("correspondence")
        .and_then(|v| v.as_array())
        .ok_or_else(|| CmdError::Config("missing `correspondence` array".to_string()))?;
    let (tg_lo, tg_hi) = g.domain();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for p in pairs {
        let row = p
            .as_array()
            .filter(|r| r.len() == 2)
            .ok_or_else(|| CmdError::Config("correspondence rows must be [t, t~]".to_string()))?;
        let t_g = row[0].as_f64().ok_or_else(|| CmdError::Config("bad number".into()))?;
        let t_gt = row[1].as_f64().ok_or_else(|| CmdError::Config("bad number".into()))?;
        // rows outside the curve's usable parameter window are dropped (a
        // sampled curve loses its stencil margins)
        if t_g < tg_lo || t_g > tg_hi {
            continue;
        }
        xs.push(g_map.s_of_t(t_g));
        ys.push(gt_map.s_of_t(t_gt));
    }
    if xs.len() < 4 {
        return Err(CmdError::Config(
            "correspondence needs at least 4 usable rows".to_string(),
        ));
    }
    if xs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CmdError::Geometry(PairError::NotMonotone.to_string()));
    }
    let n = xs.len();
    // second-order derivative of the sampled map by quadratic fit, also at
    // the two ends
    let tri = |a: usize, b: usize, c: usize, at: usize| -> f64 {
        let (xa, xb, xc) = (xs[a], xs[b], xs[c]);
        let (ya, yb, yc) = (ys[a], ys[b], ys[c]);
        let x = xs[at];
        ya * (2.0 * x - xb - xc) / ((xa - xb) * (xa - xc))
            + yb * (2.0 * x - xa - xc) / ((xb - xa) * (xb - xc))
            + yc * (2.0 * x - xa - xb) / ((xc - xa) * (xc - xb))
    };
    let mut ds = vec![0.0; n];
    for i in 0..n {
        ds[i] = if i == 0 {
            tri(0, 1, 2, 0)
        } else if i == n - 1 {
            tri(n - 3, n - 2, n - 1, n - 1)
        } else {
            tri(i - 1, i, i + 1, i)
        };
    }
    Ok(MonotoneMap::new(xs, ys, ds))
}

fn arc_matched_correspondence(g_map: &ArcLengthMap, gt_map: &ArcLengthMap) -> MonotoneMap {
    let l = g_map.total.min(gt_map.total);
    let n = 200;
    let xs: Vec<f64> = (0..=n).map(|i| l * i as f64 / n as f64).collect();
    let ys = xs.clone();
    let ds = vec![1.0; n + 1];
    MonotoneMap::new(xs, ys, ds)
}

fn cmd_verify(
    spec_path: &PathBuf,
    partner_path: &PathBuf,
    correspondence: Option<PathBuf>,
    common: &CommonOpts,
) -> Result<bool, CmdError> {
    let (tol, sig) = setup(common)?;
    let (_, g) = load_curve(spec_path, sig)?;
    let (_, gt) = load_curve(partner_path, sig)?;
    let g_map = arclength_map(g.as_ref(), g.domain(), 1e-10)?;
    let gt_map = arclength_map(gt.as_ref(), gt.domain(), 1e-10)?;
    let corr = match &correspondence {
        Some(path) => load_correspondence(path, g.as_ref(), &g_map, &gt_map)?,
        None => arc_matched_correspondence(&g_map, &gt_map),
    };
    let pair = pair_from_curves(g, gt, &corr, None)?;
    let rows = pair_samples(&pair, common.samples)?;
    let mut report = build_pair_report(&pair, rows, &tol)?;
    attach_constancy(&pair, &mut report, &tol)?;
    // the helix/line characterization, on the given correspondence
    let r2 = check_helix_line_characterization(
        pair.g.as_ref(),
        &pair.g_map,
        pair.gt.as_ref(),
        &pair.gt_map,
        &corr,
        common.samples.max(7),
    );
    if let Ok(r2) = r2 {
        report.findings.push(format!(
            "helix_line: angle_side={} helix_line_side={} indeterminate={}",
            r2.angle_side, r2.helix_line_side, r2.indeterminate
        ));
    }
    let bytes = render_pair_report(&report, &common.format)?;
    write_output(&common.out, &bytes)?;
    Ok(report.all_pass())
}

fn cmd_wm_check(
    spec_path: &PathBuf,
    partner_path: &PathBuf,
    correspondence: Option<PathBuf>,
    tol_zero: f64,
    common: &CommonOpts,
) -> Result<bool, CmdError> {
    let (tol, sig) = setup(common)?;
    if tol_zero <= 0.0 {
        return Err(CmdError::Config("--tol-zero must be positive".to_string()));
    }
    let (_, g) = load_curve(spec_path, sig)?;
    let (_, gt) = load_curve(partner_path, sig)?;
    let g_map = arclength_map(g.as_ref(), g.domain(), 1e-10)?;
    let gt_map = arclength_map(gt.as_ref(), gt.domain(), 1e-10)?;
    let corr = match &correspondence {
        Some(path) => load_correspondence(path, g.as_ref(), &g_map, &gt_map)?,
        None => arc_matched_correspondence(&g_map, &gt_map),
    };
    let outcome = wm_validate(g.as_ref(), gt.as_ref(), &corr, tol_zero, common.samples)?;
    let t_orth = tol.get("orthogonality");
    let pass = outcome.max_orth_g < t_orth
        && outcome.max_orth_gt < t_orth
        && outcome.z_empty_interior
        && outcome.n_empty_interior;
    let body = serialize_wm(&outcome, &common.format).map_err(|e| CmdError::Config(e.to_string()))?;
    let bytes = if common.format == "csv" {
        let mut head = String::from("# mannheim wm-check\n");
        let _ = writeln!(
            head,
            "# z_intervals={:?} n_intervals={:?} z_empty_interior={} n_empty_interior={}",
            outcome.z_intervals, outcome.n_intervals, outcome.z_empty_interior,
            outcome.n_empty_interior
        );
        let mut b = head.into_bytes();
        b.extend_from_slice(&body);
        b
    } else {
        body
    };
    write_output(&common.out, &bytes)?;
    Ok(pass)
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    spec_path: &PathBuf,
    lambda_min: f64,
    lambda_max: f64,
    lambda_steps: usize,
    mu: f64,
    case: Option<u8>,
    common: &CommonOpts,
) -> Result<bool, CmdError> {
    let (tol, sig) = setup(common)?;
    if lambda_steps == 0 || !(lambda_max > lambda_min) {
        return Err(CmdError::Config(
            "empty lambda range: need lambda_min < lambda_max and lambda_steps > 0".to_string(),
        ));
    }
    let (_, curve) = load_curve(spec_path, sig)?;
    let map = arclength_map(curve.as_ref(), curve.domain(), 1e-10)?;

    // measured curvature/torsion of the input, treated as the Mannheim
    // curve for the formula columns
    let n_probe = 64;
    let mut kappas = Vec::with_capacity(n_probe);
    let mut taus = Vec::with_capacity(n_probe);
    let mut eps = (0.0, 0.0);
    for i in 0..n_probe {
        let s = map.total * (i as f64 + 0.5) / n_probe as f64;
        let f = frenet_apparatus(curve.as_ref(), &map, s)?;
        kappas.push(f.kappa);
        taus.push(f.tau);
        eps = (f.eps1, f.eps2);
    }
    let case_id = match case {
        Some(k) => CaseId::from_index(k)
            .ok_or_else(|| CmdError::Config(format!("case must be 1..=5, got {k}")))?,
        None => match (eps.0 as i8, eps.1 as i8) {
            (-1, 1) => CaseId::Case1,
            (1, -1) => CaseId::Case3,
            _ => CaseId::Case4,
        },
    };
    let den_sign = match case_id {
        CaseId::Case1 | CaseId::Case2 | CaseId::Case3 => -1.0,
        _ => 1.0,
    };

    let mut out = String::new();
    out.push_str("# mannheim sweep\n");
    let _ = writeln!(out, "# case={} mu={}", case_id.index(), mu);
    out.push_str(
        "lambda,denom_min,degenerate,tau_formula_absmax,construct_ok,admissibility,max_identity_residual,max_fm_defect\n",
    );
    let mut all_ok = true;
    for i in 0..lambda_steps {
        let lambda = if lambda_steps == 1 {
            lambda_min
        } else {
            lambda_min + (lambda_max - lambda_min) * i as f64 / (lambda_steps - 1) as f64
        };
        if lambda == 0.0 {
            continue;
        }
        let mut denom_min = f64::INFINITY;
        let mut tau_max: f64 = 0.0;
        let mut degenerate = false;
        for j in 0..n_probe {
            let den = 1.0 + den_sign * lambda * mu * kappas[j];
            denom_min = denom_min.min(den.abs());
            match partner_torsion(kappas[j], taus[j], lambda, mu, case_id) {
                Ok(v) => tau_max = tau_max.max(v.abs()),
                Err(_) => degenerate = true,
            }
            if den.abs() < 1e-6 {
                degenerate = true;
            }
        }
        let (construct_ok, admissibility, max_id, max_fm) =
            match construct_partner_curve(Arc::clone(&curve), lambda, None) {
                Ok(pair) => match pair_samples(&pair, 32) {
                    Ok(rows) => {
                        let mid = rows
                            .iter()
                            .flat_map(|r| r.res_resolved.iter().map(|v| v.abs()))
                            .fold(0.0f64, f64::max);
                        let fm = rows.iter().map(|r| r.fm_defect).fold(0.0f64, f64::max);
                        (true, pair.link.admissibility, mid, fm)
                    }
                    Err(_) => (false, f64::NAN, f64::NAN, f64::NAN),
                },
                Err(_) => (false, f64::NAN, f64::NAN, f64::NAN),
            };
        if degenerate || !construct_ok || max_id >= tol.get("identity") {
            all_ok = false;
        }
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            fmt17(lambda),
            fmt17(denom_min),
            u8::from(degenerate),
            fmt17(tau_max),
            u8::from(construct_ok),
            fmt17(admissibility),
            fmt17(max_id),
            fmt17(max_fm)
        );
    }
    write_output(&common.out, out.as_bytes())?;
    Ok(all_ok)
}
