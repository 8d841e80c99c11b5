use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;

use ppxfer::amplitudes::{grid, Propagator};
use ppxfer::chain::{adjacency_matrix, build_profile};
use ppxfer::observables::{battery_grid, battery_metrics, magnetization_receiver};
use ppxfer::perturbation::{
    analyze, analyze_transfer, approximate_ratio, clusters_for, commensurability_check, linear_fit,
    peak_scales, predict_from_clusters, splitting_scaling,
};
use ppxfer::resonance::{report, resonance_count, universal_lengths};
use ppxfer::spectral::diagonalize;
use ppxfer::validation::{oracle_suite, run_validation, ORACLE_TOL};
use ppxfer::{ChainSpec, Error, Result, Statistics};

#[derive(Parser)]
#[command(name = "ppxfer", version, about = "Many-excitation transfer through weakly coupled tight-binding chains")]
struct Cli {
    /// Worker threads for sweeps and scans.
    #[arg(long, env = "PPXFER_THREADS", global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single-particle spectrum with mirror parities.
    Spectrum {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Transfer probability curve plus a JSON sidecar with the peak.
    Transfer {
        #[command(flatten)]
        chain: ChainArgs,
        /// End of the time window (default: twice the predicted transfer time).
        #[arg(long)]
        tmax: Option<f64>,
        /// Output time step (default: the search resolution).
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Sidecar path (default: OUT.json, or stderr without --out).
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Sender–wire resonances and transfer feasibility.
    Resonance {
        #[arg(long)]
        ns: Option<usize>,
        #[arg(long)]
        nw: Option<usize>,
        /// Print resonance counts per residue class for n_s = 1..=4.
        #[arg(long)]
        table: bool,
        /// Largest wire multiple checked for class invariance.
        #[arg(long, default_value_t = 5)]
        lmax: usize,
    },
    /// Level clusters, splittings, predicted transfer time and ratios.
    Perturbation {
        #[command(flatten)]
        chain: ChainArgs,
        /// Comma-separated couplings for splitting-order fits.
        #[arg(long, value_delimiter = ',')]
        scaling: Vec<f64>,
    },
    /// Quantum-battery charging curve of the receiver block.
    Battery {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long)]
        tmax: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Exact and predicted transfer times over wire lengths 20 l + family.
    Scaling {
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
        ns: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        lmin: usize,
        #[arg(long, default_value_t = 5)]
        lmax: usize,
        #[arg(long, default_value_t = 0.01)]
        j0: f64,
        /// Wire family offset, 1 or 17.
        #[arg(long, default_value_t = 1)]
        family: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Determinant/permanent route against brute-force Fock evolution.
    OracleCheck,
    /// Run the full self-check suite.
    Validate {
        #[arg(long, hide = true)]
        inject_asymmetry: bool,
    },
}

#[derive(Args, Clone)]
struct ChainArgs {
    /// JSON chain configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, alias = "nb")]
    ns: Option<usize>,
    #[arg(long)]
    nw: Option<usize>,
    #[arg(long)]
    j0: Option<f64>,
    #[arg(long)]
    h: Option<f64>,
    #[arg(long)]
    stats: Option<Statistics>,
}

impl ChainArgs {
    fn spec(&self) -> Result<ChainSpec> {
        let mut spec = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
                serde_json::from_str::<ChainSpec>(&text)
                    .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?
            }
            None => {
                let missing = |name: &str| Error::InvalidConfig(format!("--{name} is required without --config"));
                ChainSpec {
                    n_s: self.ns.ok_or_else(|| missing("ns"))?,
                    n_w: self.nw.ok_or_else(|| missing("nw"))?,
                    n_r: None,
                    j: 1.0,
                    j0: self.j0.ok_or_else(|| missing("j0"))?,
                    h: 0.0,
                    statistics: Statistics::Fermion,
                }
            }
        };
        if let Some(v) = self.ns {
            spec.n_s = v;
        }
        if let Some(v) = self.nw {
            spec.n_w = v;
        }
        if let Some(v) = self.j0 {
            spec.j0 = v;
        }
        if let Some(v) = self.h {
            spec.h = v;
        }
        if let Some(v) = self.stats {
            spec.statistics = v;
        }
        spec.validate()?;
        spec.check_weak_coupling();
        Ok(spec)
    }
}

/// CSV writer with a `#`-prefixed JSON header describing the run.
fn write_csv(path: Option<&Path>, header: &serde_json::Value, columns: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut text = format!("# {header}\n{}\n", columns.join(","));
    for row in rows {
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    emit(path, &text)
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn print_json(value: &serde_json::Value) -> Result<()> {
    emit(None, &(serde_json::to_string_pretty(value)? + "\n"))
}

fn write_sidecar(sidecar: Option<&Path>, out: Option<&Path>, value: &serde_json::Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    let path = sidecar.map(Path::to_path_buf).or_else(|| {
        out.map(|o| {
            let mut s = o.as_os_str().to_owned();
            s.push(".json");
            PathBuf::from(s)
        })
    });
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => eprint!("{text}"),
    }
    Ok(())
}

fn cmd_spectrum(chain: &ChainArgs, out: Option<&Path>) -> Result<u8> {
    let spec = chain.spec()?;
    let dec = diagonalize(&adjacency_matrix(&build_profile(&spec)?))?;
    let rows: Vec<Vec<f64>> = (0..dec.len())
        .map(|k| vec![(k + 1) as f64, dec.eigenvalues()[k], dec.parity(k).map_or(0.0, |p| p.sign())])
        .collect();
    let header = json!({"command": "spectrum", "spec": spec});
    write_csv(out, &header, &["level", "energy", "parity"], &rows)?;
    Ok(0)
}

fn cmd_transfer(chain: &ChainArgs, tmax: Option<f64>, dt: Option<f64>, out: Option<&Path>, sidecar: Option<&Path>) -> Result<u8> {
    let spec = chain.spec()?;
    let analysis = analyze_transfer(&spec, tmax)?;
    let step = dt.unwrap_or(analysis.peak.sample_step);
    if !(step > 0.0) {
        return Err(Error::InvalidConfig("--dt must be positive".into()));
    }
    let times = grid(0.0, analysis.t_max, step);
    let prop = Propagator::from_spec(&spec)?;
    let curve = prop.scan(&times)?;
    let rows: Vec<Vec<f64>> = (0..curve.len())
        .into_par_iter()
        .map(|i| {
            let t = curve.times[i];
            vec![t, curve.p_fermion[i], curve.p_boson[i], magnetization_receiver(&prop, t)]
        })
        .collect();
    let header = json!({"command": "transfer", "spec": spec, "t_max": analysis.t_max, "dt": step});
    write_csv(out, &header, &["t", "p_fermion", "p_boson", "m_receiver"], &rows)?;
    let sidecar_value = json!({
        "spec": spec,
        "peak": analysis.peak,
        "prediction": analysis.prediction,
        "pp_predicted": analysis.prediction.is_some(),
        "reference_time": analysis.reference_time,
        "t_max": analysis.t_max,
    });
    write_sidecar(sidecar, out, &sidecar_value)?;
    Ok(0)
}

fn cmd_resonance(ns: Option<usize>, nw: Option<usize>, table: bool, lmax: usize) -> Result<u8> {
    let value = if table {
        let rows: Vec<serde_json::Value> = (1..=4)
            .map(|n_s| {
                let counts: Vec<usize> = (0..=n_s).map(|p| resonance_count(n_s, p)).collect();
                let invariant = (0..=n_s).all(|p| {
                    (0..=lmax).all(|l| report(n_s, l * (n_s + 1) + p).n_res == counts[p] || l * (n_s + 1) + p == 0)
                });
                json!({"n_s": n_s, "counts": counts, "class_invariant": invariant})
            })
            .collect();
        json!({"table": rows, "universal_lengths": universal_lengths(lmax)})
    } else {
        let n_s = ns.ok_or_else(|| Error::InvalidConfig("--ns is required without --table".into()))?;
        let n_w = nw.ok_or_else(|| Error::InvalidConfig("--nw is required without --table".into()))?;
        if n_s == 0 || n_w == 0 {
            return Err(Error::InvalidConfig("block sizes must be positive".into()));
        }
        serde_json::to_value(report(n_s, n_w))?
    };
    print_json(&value)?;
    Ok(0)
}

fn cmd_perturbation(chain: &ChainArgs, scaling: &[f64]) -> Result<u8> {
    let spec = chain.spec()?;
    let report = analyze(&spec)?;
    let mut value = serde_json::to_value(&report)?;
    // Beat commensurability only matters when no cluster is resonant.
    if spec.n_s == 3 && report.clusters.iter().all(|c| c.multiplicity == 2) {
        if let Some(r) = &report.ratios {
            let ratio = approximate_ratio(r.value, r.error_bar.max(0.02), 64)?;
            value["commensurability"] = serde_json::to_value(commensurability_check(ratio)?)?;
        }
    }
    if !scaling.is_empty() {
        value["scaling"] = serde_json::to_value(splitting_scaling(&spec, scaling)?)?;
    }
    value["spec"] = serde_json::to_value(&spec)?;
    print_json(&value)?;
    Ok(0)
}

fn cmd_battery(chain: &ChainArgs, tmax: Option<f64>, out: Option<&Path>, sidecar: Option<&Path>) -> Result<u8> {
    let spec = chain.spec()?;
    let prop = Propagator::from_spec(&spec)?;
    let clusters = clusters_for(&spec)?;
    let t_max = match tmax {
        Some(t) => t,
        None => 2.0 * predict_from_clusters(&spec, &clusters)?.tau,
    };
    let times = battery_grid(&prop, &spec, peak_scales(&clusters).fast, t_max)?;
    let r = battery_metrics(&prop, &spec, &times)?;
    let rows: Vec<Vec<f64>> = (0..r.times.len())
        .map(|i| vec![r.times[i], r.e_b[i], r.e_onsite[i], r.e_hop[i], r.p_s[i]])
        .collect();
    let header = json!({"command": "battery", "spec": spec, "t_max": t_max});
    write_csv(out, &header, &["t", "E_B", "E_onsite", "E_hop", "P_s"], &rows)?;
    let summary = json!({
        "spec": spec,
        "E_bar": r.e_bar,
        "tau_bar": r.tau_bar,
        "P_tilde": r.p_tilde,
        "tau_tilde": r.tau_tilde,
        "P_bar": r.p_bar,
        "delta_E_sw_max": r.max_abs_switching(),
        "E_hop_max": r.max_abs_e_hop(),
    });
    write_sidecar(sidecar, out, &summary)?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_scaling(ns: &[usize], lmin: usize, lmax: usize, j0: f64, family: usize, out: Option<&Path>, sidecar: Option<&Path>) -> Result<u8> {
    if !matches!(family, 1 | 17) {
        return Err(Error::InvalidConfig("--family must be 1 or 17".into()));
    }
    if lmin > lmax {
        return Err(Error::InvalidConfig("--lmin exceeds --lmax".into()));
    }
    let points: Vec<(usize, usize)> = ns
        .iter()
        .flat_map(|&n_s| (lmin..=lmax).map(move |l| (n_s, 20 * l + family)))
        .collect();
    let rows: Vec<Vec<f64>> = points
        .par_iter()
        .map(|&(n_s, n_w)| {
            let spec = ChainSpec::new(n_s, n_w, j0, 0.0, Statistics::Fermion)?;
            let a = analyze_transfer(&spec, None)?;
            let (tau, tau_alt) = a.prediction.map_or((f64::NAN, f64::NAN), |p| (p.tau, p.tau_alt));
            Ok(vec![n_s as f64, n_w as f64, a.peak.t_fermion, tau, tau_alt, a.peak.p_fermion])
        })
        .collect::<Result<_>>()?;
    let header = json!({"command": "scaling", "ns": ns, "lmin": lmin, "lmax": lmax, "j0": j0, "family": family});
    write_csv(out, &header, &["n_s", "n_w", "tau_exact", "tau_predicted", "tau_alt", "p_peak"], &rows)?;
    let fits: Vec<serde_json::Value> = ns
        .iter()
        .map(|&n_s| {
            let sel: Vec<&Vec<f64>> = rows.iter().filter(|r| r[0] as usize == n_s).collect();
            let xs: Vec<f64> = sel.iter().map(|r| r[1].ln()).collect();
            let exact: Vec<f64> = sel.iter().map(|r| r[2].ln()).collect();
            let pred: Vec<f64> = sel.iter().map(|r| r[3].ln()).collect();
            let fit = |ys: &[f64]| (ys.len() >= 2 && ys.iter().all(|y| y.is_finite())).then(|| linear_fit(&xs, ys).0);
            json!({"n_s": n_s, "exponent_exact": fit(&exact), "exponent_predicted": fit(&pred)})
        })
        .collect();
    write_sidecar(sidecar, out, &json!({"fits": fits}))?;
    Ok(0)
}

fn cmd_oracle_check() -> Result<u8> {
    let s = oracle_suite()?;
    print_json(&serde_json::to_value(&s)?)?;
    let ok = s.max_probability_deviation < ORACLE_TOL && s.max_occupation_deviation < ORACLE_TOL;
    Ok(if ok { 0 } else { 1 })
}

fn cmd_validate(inject_asymmetry: bool) -> Result<u8> {
    let checks = run_validation(inject_asymmetry)?;
    let mut text = String::new();
    for c in &checks {
        text.push_str(&format!(
            "{} {:<24} {:.3e} (limit {:.1e})\n",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.value,
            c.limit
        ));
    }
    emit(None, &text)?;
    Ok(if checks.iter().all(|c| c.passed) { 0 } else { 1 })
}

fn run(cli: Cli) -> Result<u8> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::InvalidConfig("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    }
    match &cli.command {
        Command::Spectrum { chain, out } => cmd_spectrum(chain, out.as_deref()),
        Command::Transfer {
            chain,
            tmax,
            dt,
            out,
            sidecar,
        } => cmd_transfer(chain, *tmax, *dt, out.as_deref(), sidecar.as_deref()),
        Command::Resonance { ns, nw, table, lmax } => cmd_resonance(*ns, *nw, *table, *lmax),
        Command::Perturbation { chain, scaling } => cmd_perturbation(chain, scaling),
        Command::Battery {
            chain,
            tmax,
            out,
            sidecar,
        } => cmd_battery(chain, *tmax, out.as_deref(), sidecar.as_deref()),
        Command::Scaling {
            ns,
            lmin,
            lmax,
            j0,
            family,
            out,
            sidecar,
        } => cmd_scaling(ns, *lmin, *lmax, *j0, *family, out.as_deref(), sidecar.as_deref()),
        Command::OracleCheck => cmd_oracle_check(),
        Command::Validate { inject_asymmetry } => cmd_validate(*inject_asymmetry),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
