use crate::output::{config_line, csv_table, emit, num, opt_num, single, stderr_cell};
use crate::region::{read_region_file, RegionArg};
use crate::{Command, Common, Format, PolyArgs};
use clap::Args;
use serde_json::{json, Map, Value};
use std::path::{Path, PathBuf};
use wehrl::experiments::{
    fock_limit_check, sharpness_family, sweep_concentration_stability, sweep_wehrl_stability, write_records_csv,
    SweepConfig, SweepOutput,
};
use wehrl::functionals::{
    concentration, distance_to_kernels, optimal_concentration, sup_modulus, wehrl_entropy, ConvexFn, RegionSpec,
    ResultRecord, Settings,
};
use wehrl::levelsets::{write_profile_csv, LevelProfile};
use wehrl::polyspace::{read_poly, AffinePoly, HomPoly};
use wehrl::states::{husimi_maximum, state_concentration, state_entropy, trace_distance_to_coherent, DensityState};
use wehrl::{Error, Estimate, Result};

/// Sweep input: a JSON config plus command-line overrides.
#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    /// Comma-separated list replacing the configured convex functions.
    #[arg(long, value_delimiter = ',')]
    phi: Option<Vec<String>>,
    /// Replaces the configured measures.
    #[arg(long, value_delimiter = ',')]
    omega: Option<Vec<f64>>,
    #[arg(long)]
    omega_tilde: Option<f64>,
}

pub fn run(command: Command, common: &Common) -> Result<()> {
    match command {
        Command::Entropy { poly, phi } => entropy(common, &poly, &phi),
        Command::Concentration { poly, region, omega } => {
            let region = match (region, omega) {
                (Some(r), None) => RegionArg::parse(&r)?,
                (None, Some(w)) => RegionArg::Superlevel(w),
                (Some(_), Some(_)) => return Err(Error::Config("give either --region or --omega, not both".into())),
                (None, None) => return Err(Error::Config("concentration needs --region or --omega".into())),
            };
            concentration_cmd(common, &poly, &region)
        }
        Command::Distance { poly } => distance(common, &poly),
        Command::Profile { poly, points } => profile(common, &poly, points),
        Command::SweepConc { sweep } => sweep_cmd(common, &sweep, "sweep-conc"),
        Command::SweepWehrl { sweep } => sweep_cmd(common, &sweep, "sweep-wehrl"),
        Command::Sharpness { d, n, eps, phi, omega } => sharpness(common, d, n, &eps, &phi, omega),
        Command::FockLimit {
            poly,
            degrees,
            area,
            phi,
        } => fock(common, &poly.poly, &degrees, area, &phi),
        Command::StateEntropy { state, phi } => state_entropy_cmd(common, &state, &phi),
        Command::StateConcentration { state, region } => {
            state_concentration_cmd(common, &state, &RegionArg::parse(&region)?)
        }
        Command::StateDistance { state } => state_distance(common, &state),
    }
}

fn settings_json(s: &Settings) -> Value {
    json!({
        "seed": s.seed,
        "samples": s.samples,
        "rule_degree": s.rule_degree,
        "starts": s.starts,
    })
}

/// Resolved configuration of a single evaluation.
fn base_config(command: &str, settings: &Settings, extra: Value) -> Value {
    let mut map = Map::new();
    map.insert("command".into(), json!(command));
    if let Value::Object(s) = settings_json(settings) {
        map.extend(s);
    }
    if let Value::Object(e) = extra {
        map.extend(e);
    }
    Value::Object(map)
}

fn load_poly(args: &PolyArgs) -> Result<HomPoly> {
    let q = read_poly(&args.poly)?;
    if args.normalize {
        q.normalized()
    } else {
        Ok(q)
    }
}

fn poly_json(args: &PolyArgs, q: &HomPoly) -> Value {
    json!({
        "poly": args.poly.display().to_string(),
        "normalize": args.normalize,
        "d": q.dim(),
        "N": q.degree(),
    })
}

fn merge(a: Value, b: Value) -> Value {
    match (a, b) {
        (Value::Object(mut x), Value::Object(y)) => {
            x.extend(y);
            Value::Object(x)
        }
        (a, _) => a,
    }
}

fn parse_phi(text: &str) -> Result<ConvexFn> {
    text.parse()
}

fn entropy(common: &Common, args: &PolyArgs, phi: &str) -> Result<()> {
    let settings = common.settings();
    let q = load_poly(args)?;
    let phi = parse_phi(phi)?;
    let config = base_config("entropy", &settings, merge(poly_json(args, &q), json!({ "phi": phi.tag() })));
    let r = wehrl_entropy(&q, &phi, &settings)?;
    single(common, &ResultRecord::new("wehrl_entropy", &r.estimate, config).with_method(r.method))
}

fn concentration_cmd(common: &Common, args: &PolyArgs, region: &RegionArg) -> Result<()> {
    let settings = common.settings();
    let q = load_poly(args)?;
    let config = base_config(
        "concentration",
        &settings,
        merge(poly_json(args, &q), json!({ "region": region.label() })),
    );
    let record = match region {
        RegionArg::Cap(t) => {
            let sup = sup_modulus(&q, &settings)?;
            let spec = RegionSpec::cap(sup.argmax.clone(), *t)?;
            let c = concentration(&q, &spec, &settings)?;
            ResultRecord::new("concentration", &c.estimate, config)
                .with_method(c.method)
                .with_argmax(&sup.argmax)
        }
        RegionArg::Superlevel(omega) => {
            let c = optimal_concentration(&q, *omega, &settings)?;
            ResultRecord::new("concentration", &c.estimate, config)
                .with_method(c.method)
                .with_argmax(&c.argmax)
        }
        RegionArg::File(path) => {
            let ind = read_region_file(path, q.degree(), q.dim())?;
            let c = concentration(&q, &RegionSpec::Indicator(ind), &settings)?;
            ResultRecord::new("concentration", &c.estimate, config).with_method(c.method)
        }
    };
    single(common, &record)
}

fn distance(common: &Common, args: &PolyArgs) -> Result<()> {
    let settings = common.settings();
    let q = load_poly(args)?;
    let config = base_config("distance", &settings, poly_json(args, &q));
    let (dist, sup) = distance_to_kernels(&q, &settings)?;
    single(
        common,
        &ResultRecord::new("distance_to_kernels", &Estimate::exact(dist), config).with_argmax(&sup.argmax),
    )
}

fn profile(common: &Common, args: &PolyArgs, points: usize) -> Result<()> {
    let settings = common.settings();
    let q = load_poly(args)?;
    let config = base_config("profile", &settings, merge(poly_json(args, &q), json!({ "points": points })));
    let sup = sup_modulus(&q, &settings)?;
    let profile = LevelProfile::sample(&q, settings.samples, settings.seed, Some(sup.t))?;
    let text = match common.format {
        Format::Csv => {
            let mut body = Vec::new();
            write_profile_csv(&profile, points, &mut body)?;
            config_line(&config)? + &String::from_utf8(body).expect("csv output is UTF-8")
        }
        Format::Json => {
            let rows: Vec<Value> = profile
                .export_rows(points)
                .iter()
                .map(|r| json!({ "t": r[0], "mu_empirical": r[1], "mu0": r[2], "diff": r[3] }))
                .collect();
            serde_json::to_string_pretty(&json!({
                "config": config,
                "t_sup": sup.t,
                "sup_distance_to_extremal": profile.sup_distance_to_extremal(),
                "rows": rows,
            }))? + "\n"
        }
    };
    emit(common, &text)
}

/// Reads a sweep config and applies the command-line overrides.
fn resolve_sweep(common: &Common, args: &SweepArgs) -> Result<SweepConfig> {
    let mut cfg = SweepConfig::read(&args.config)?;
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(samples) = common.samples {
        cfg.samples = samples;
    }
    if let Some(k) = common.rule_degree {
        cfg.rule_degree = Some(k);
    }
    if let Some(starts) = common.starts {
        cfg.starts = starts;
    }
    if let Some(phi) = &args.phi {
        cfg.phi = phi.clone();
    }
    if let Some(omega) = &args.omega {
        cfg.omega = omega.clone();
    }
    if let Some(w) = args.omega_tilde {
        cfg.omega_tilde = w;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn summary_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".summary.json");
    PathBuf::from(name)
}

fn sweep_cmd(common: &Common, args: &SweepArgs, command: &str) -> Result<()> {
    let cfg = resolve_sweep(common, args)?;
    let SweepOutput { records, summary } = if command == "sweep-conc" {
        sweep_concentration_stability(&cfg)?
    } else {
        sweep_wehrl_stability(&cfg)?
    };
    let config = json!({ "command": command, "sweep": cfg });
    let summary_json = serde_json::to_string_pretty(&summary)? + "\n";
    let text = match common.format {
        Format::Csv => {
            let mut body = Vec::new();
            write_records_csv(&records, &mut body)?;
            match &common.out {
                Some(out) => std::fs::write(summary_path(out), &summary_json)?,
                None => eprint!("{summary_json}"),
            }
            config_line(&config)? + &String::from_utf8(body).expect("csv output is UTF-8")
        }
        Format::Json => {
            serde_json::to_string_pretty(&json!({ "config": config, "summary": summary, "records": records }))? + "\n"
        }
    };
    emit(common, &text)
}

fn sharpness(common: &Common, d: usize, n: usize, eps: &[f64], phi: &str, omega: Option<f64>) -> Result<()> {
    let settings = common.settings();
    let phi = parse_phi(phi)?;
    let config = base_config(
        "sharpness",
        &settings,
        json!({ "d": d, "N": n, "eps": eps, "phi": phi.tag(), "omega": omega }),
    );
    let report = sharpness_family(d, n, eps, &phi, omega, &settings)?;
    let text = match common.format {
        Format::Json => serde_json::to_string_pretty(&json!({ "config": config, "report": report }))? + "\n",
        Format::Csv => {
            let rows: Vec<Vec<String>> = report
                .points
                .iter()
                .map(|p| {
                    vec![
                        num(p.eps),
                        num(p.t_sup),
                        num(p.distance),
                        num(p.distance_sqr_direct),
                        num(p.entropy_deficit.value),
                        stderr_cell(&p.entropy_deficit),
                        opt_num(p.concentration_deficit.map(|c| c.value)),
                        p.concentration_deficit.map(|c| stderr_cell(&c)).unwrap_or_default(),
                        opt_num(p.ratio),
                    ]
                })
                .collect();
            csv_table(
                &config,
                &[
                    "eps",
                    "t_sup",
                    "distance",
                    "distance_sqr_direct",
                    "entropy_deficit",
                    "entropy_deficit_stderr",
                    "concentration_deficit",
                    "concentration_deficit_stderr",
                    "ratio",
                ],
                &rows,
            )?
        }
    };
    emit(common, &text)
}

fn fock(common: &Common, path: &Path, degrees: &[usize], area: f64, phi: &str) -> Result<()> {
    let settings = common.settings();
    let phi = parse_phi(phi)?;
    let f = AffinePoly::from_homogeneous(read_poly(path)?);
    let config = base_config(
        "fock-limit",
        &settings,
        json!({
            "poly": path.display().to_string(),
            "d": f.dim(),
            "degrees": degrees,
            "area": area,
            "phi": phi.tag(),
        }),
    );
    let report = fock_limit_check(&f, degrees, area, &phi, &settings)?;
    let text = match common.format {
        Format::Json => serde_json::to_string_pretty(&json!({ "config": config, "report": report }))? + "\n",
        Format::Csv => {
            let mut rows: Vec<Vec<String>> = vec![vec![
                "fock".into(),
                num(report.oracle_concentration.value),
                stderr_cell(&report.oracle_concentration),
                num(report.oracle_entropy.value),
                stderr_cell(&report.oracle_entropy),
                num(report.oracle_distance),
                String::new(),
                String::new(),
            ]];
            rows.extend(report.points.iter().map(|p| {
                vec![
                    p.n.to_string(),
                    num(p.concentration.value),
                    stderr_cell(&p.concentration),
                    num(p.entropy.value),
                    stderr_cell(&p.entropy),
                    num(p.distance),
                    num(p.concentration_gap),
                    p.within_tolerance.to_string(),
                ]
            }));
            csv_table(
                &config,
                &[
                    "N",
                    "concentration",
                    "concentration_stderr",
                    "entropy",
                    "entropy_stderr",
                    "distance",
                    "concentration_gap",
                    "within_tolerance",
                ],
                &rows,
            )?
        }
    };
    emit(common, &text)
}

fn state_json(path: &Path, rho: &DensityState) -> Value {
    json!({
        "state": path.display().to_string(),
        "d": rho.dim(),
        "N": rho.degree(),
        "rank": rho.rank(),
    })
}

fn state_entropy_cmd(common: &Common, path: &Path, phi: &str) -> Result<()> {
    let settings = common.settings();
    let rho = DensityState::read(path)?;
    let phi = parse_phi(phi)?;
    let config = base_config("state-entropy", &settings, merge(state_json(path, &rho), json!({ "phi": phi.tag() })));
    let r = state_entropy(&rho, &phi, &settings)?;
    single(common, &ResultRecord::new("wehrl_entropy", &r.estimate, config).with_method(r.method))
}

fn state_concentration_cmd(common: &Common, path: &Path, region: &RegionArg) -> Result<()> {
    let settings = common.settings();
    let rho = DensityState::read(path)?;
    let config = base_config(
        "state-concentration",
        &settings,
        merge(state_json(path, &rho), json!({ "region": region.label() })),
    );
    let record = match region {
        RegionArg::Cap(t) => {
            let (_, eta) = husimi_maximum(&rho, &settings)?;
            let c = state_concentration(&rho, &RegionSpec::cap(eta.clone(), *t)?, &settings)?;
            ResultRecord::new("concentration", &c.estimate, config)
                .with_method(c.method)
                .with_argmax(&eta)
        }
        RegionArg::Superlevel(omega) => {
            if rho.rank() != 1 {
                return Err(Error::Config(format!(
                    "superlevel regions need a pure state; this state has rank {}",
                    rho.rank()
                )));
            }
            let q = &rho.components()[0].1;
            let c = optimal_concentration(q, *omega, &settings)?;
            ResultRecord::new("concentration", &c.estimate, config)
                .with_method(c.method)
                .with_argmax(&c.argmax)
        }
        RegionArg::File(file) => {
            let ind = read_region_file(file, rho.degree(), rho.dim())?;
            let c = state_concentration(&rho, &RegionSpec::Indicator(ind), &settings)?;
            ResultRecord::new("concentration", &c.estimate, config).with_method(c.method)
        }
    };
    single(common, &record)
}

fn state_distance(common: &Common, path: &Path) -> Result<()> {
    let settings = common.settings();
    let rho = DensityState::read(path)?;
    let config = base_config("state-distance", &settings, state_json(path, &rho));
    let r = trace_distance_to_coherent(&rho, &settings)?;
    single(
        common,
        &ResultRecord::new("trace_distance_to_coherent", &Estimate::exact(r.distance), config).with_argmax(&r.center),
    )
}
