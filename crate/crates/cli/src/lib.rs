//! Command-line front end: spectra, photon distributions, entanglement tables,
//! designed-Hamiltonian trajectories, cat generation, photon sorting and
//! oracle verification.

pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use twomode::entanglement::{eigenstate_distribution, entropy_vs_e, entropy_vs_m, peak_count, EnergyRule};
use twomode::evolution::{
    cat_from_coherent, n2_trajectory_with_states, propagator, sort_cascade, uniform_grid,
};
use twomode::fockspace::MAX_PHOTONS;
use twomode::hamiltonian::{design_evenswap, design_lswap, design_pswap, h0_matrix, nonlinear_matrix};
use twomode::krawtchouk::eigensystem;
use twomode::oracle::{compare_spectra, dense_propagator, dense_subspace_eig};
use twomode::{Complex64, Coupling, Spec, State};

use output::{float, gnuplot_script, Table};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Domain(#[from] twomode::Error),
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "twomode", version, about = "Exact two-mode beam-splitter Hamiltonian simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the table here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also write a gnuplot script plotting the CSV written to --out.
    #[arg(long, global = true)]
    pub plot: Option<PathBuf>,
    /// Cross-check the computation against the dense eigensolver.
    #[arg(long, global = true)]
    pub verify: bool,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct CouplingArgs {
    #[arg(long = "gamma-re", default_value_t = 1.0, allow_hyphen_values = true)]
    pub gamma_re: f64,
    #[arg(long = "gamma-im", default_value_t = 0.0, allow_hyphen_values = true)]
    pub gamma_im: f64,
}

impl CouplingArgs {
    fn coupling(&self) -> Result<Coupling, CliError> {
        Ok(Coupling::new(Complex64::new(self.gamma_re, self.gamma_im))?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EntropyMode {
    VsM,
    VsE,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DesignName {
    Lswap,
    Evenswap,
    Pswap,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues and coefficient vectors of H0 on the M-photon subspace.
    Spectrum {
        #[arg(long = "M")]
        m: usize,
        #[command(flatten)]
        coupling: CouplingArgs,
    },
    /// Photon-number distributions |c_n(E)|² and their peak counts.
    Distribution {
        #[arg(long = "M")]
        m: usize,
        /// Energy in units of |γ|; repeat for several.
        #[arg(long, required = true, allow_hyphen_values = true)]
        energy: Vec<f64>,
    },
    /// Eigenstate entanglement against M or against E.
    Entropy {
        #[arg(long, value_enum)]
        mode: EntropyMode,
        /// The photon number (vs-e) or the largest photon number (vs-m).
        #[arg(long = "M")]
        m: usize,
        #[arg(long = "m-min", default_value_t = 0)]
        m_min: usize,
        /// Fixed energy for vs-m; the top eigenvalue E = M when omitted.
        #[arg(long, allow_hyphen_values = true)]
        energy: Option<f64>,
    },
    /// ⟨n₂⟩ trajectory under a designed Hamiltonian.
    Evolve {
        #[arg(long, value_enum)]
        design: DesignName,
        /// Start from |M,0⟩.
        #[arg(long = "M", conflicts_with = "initial")]
        m: Option<usize>,
        /// Start from |m,n⟩, given as "m,n".
        #[arg(long)]
        initial: Option<String>,
        /// Protected photon number for pswap.
        #[arg(long = "N", default_value_t = 0)]
        n: usize,
        /// Halve the pswap Hamiltonian.
        #[arg(long)]
        half: bool,
        #[arg(long, default_value_t = 1.0)]
        tau: f64,
        /// End of the time grid; 4τ when omitted.
        #[arg(long = "t-max")]
        t_max: Option<f64>,
        #[arg(long, default_value_t = 400)]
        samples: usize,
        #[command(flatten)]
        coupling: CouplingArgs,
    },
    /// Cat-state pair generated from a coherent state by the even swap.
    Cat {
        #[arg(long = "alpha-re", default_value_t = 2.0, allow_hyphen_values = true)]
        alpha_re: f64,
        #[arg(long = "alpha-im", default_value_t = 0.0, allow_hyphen_values = true)]
        alpha_im: f64,
        #[arg(long, default_value_t = 1.0)]
        tau: f64,
        #[arg(long, default_value_t = 1e-12)]
        epsilon: f64,
        #[command(flatten)]
        coupling: CouplingArgs,
    },
    /// Four-mode photon sorting cascade.
    Sort {
        /// Fock input |M⟩ in mode 1.
        #[arg(long = "M", conflicts_with = "amplitudes")]
        m: Option<usize>,
        /// Comma-separated complex amplitudes of |0⟩..|4⟩ in mode 1, e.g. "0,0.6,0.8i".
        #[arg(long, allow_hyphen_values = true)]
        amplitudes: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        tau: f64,
        #[command(flatten)]
        coupling: CouplingArgs,
    },
    /// Oracle cross-checks for every subspace up to M.
    Verify {
        #[arg(long = "M", default_value_t = 40)]
        m: usize,
        /// Perturb the dense spectrum to exercise the failure path.
        #[arg(long)]
        perturb: bool,
    },
}

/// Rendered command result.
#[derive(Debug)]
pub struct Rendered {
    pub table: Table,
    pub json: serde_json::Value,
    /// gnuplot `plot` clauses; empty when there is nothing to plot.
    pub plots: Vec<String>,
    pub axes: (&'static str, &'static str, String),
    /// One-line summary for stderr.
    pub summary: Option<String>,
}

fn check_photons(m: usize) -> Result<(), CliError> {
    if m > MAX_PHOTONS {
        return Err(twomode::Error::PhotonLimit {
            requested: m,
            limit: MAX_PHOTONS,
        }
        .into());
    }
    Ok(())
}

/// Oracle agreement for one subspace: eigenvalues within 1e-9 and
/// phase-aligned eigenvectors within 1e-8.
fn cross_check(m: usize, coupling: Coupling, perturb: bool) -> Result<(f64, f64), CliError> {
    let sys = eigensystem(m, coupling);
    let mut dense = dense_subspace_eig(&h0_matrix(m, coupling))?;
    if perturb {
        dense.eigenvalues[0] += 1e-6;
    }
    let report = compare_spectra(&dense, &sys)?;
    Ok((report.max_eigenvalue_gap, report.max_vector_gap))
}

fn verify_subspace(m: usize, coupling: Coupling) -> Result<(), CliError> {
    let (ev, vec) = cross_check(m, coupling, false)?;
    if ev < 1e-9 && vec < 1e-8 {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "M={m}: eigenvalue gap {ev:e}, eigenvector gap {vec:e}"
        )))
    }
}

fn design_spec(design: DesignName, coupling: Coupling, tau: f64, n: usize, half: bool) -> Result<Spec, CliError> {
    Ok(match design {
        DesignName::Lswap => design_lswap(coupling, tau)?,
        DesignName::Evenswap => design_evenswap(coupling, tau)?,
        DesignName::Pswap => design_pswap(coupling, tau, n, half)?,
    })
}

fn parse_initial(text: &str) -> Result<(usize, usize), CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => {
            let a = a.parse().map_err(|_| CliError::Usage(format!("bad photon count {a:?}")))?;
            let b = b.parse().map_err(|_| CliError::Usage(format!("bad photon count {b:?}")))?;
            Ok((a, b))
        }
        _ => Err(CliError::Usage(format!("--initial expects \"m,n\", got {text:?}"))),
    }
}

fn parse_amplitudes(text: &str) -> Result<Vec<Complex64>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<Complex64>()
                .map_err(|_| CliError::Usage(format!("bad complex amplitude {s:?}")))
        })
        .collect()
}

pub fn execute(cli: &Cli) -> Result<Rendered, CliError> {
    match &cli.command {
        Command::Spectrum { m, coupling } => cmd_spectrum(*m, coupling.coupling()?, cli.verify),
        Command::Distribution { m, energy } => cmd_distribution(*m, energy, cli.verify),
        Command::Entropy { mode, m, m_min, energy } => cmd_entropy(*mode, *m, *m_min, *energy),
        Command::Evolve {
            design,
            m,
            initial,
            n,
            half,
            tau,
            t_max,
            samples,
            coupling,
        } => {
            let (m1, m2) = match (m, initial) {
                (Some(m), None) => (*m, 0),
                (None, Some(text)) => parse_initial(text)?,
                _ => return Err(CliError::Usage("give exactly one of --M or --initial".into())),
            };
            let spec = design_spec(*design, coupling.coupling()?, *tau, *n, *half)?;
            let t_max = t_max.unwrap_or(4.0 * tau);
            cmd_evolve(&spec, m1, m2, t_max, *samples, cli.verify)
        }
        Command::Cat {
            alpha_re,
            alpha_im,
            tau,
            epsilon,
            coupling,
        } => cmd_cat(Complex64::new(*alpha_re, *alpha_im), coupling.coupling()?, *tau, *epsilon),
        Command::Sort {
            m,
            amplitudes,
            tau,
            coupling,
        } => {
            let input = match (m, amplitudes) {
                (Some(m), None) => twomode::evolution::fock_input(*m),
                (None, Some(text)) => parse_amplitudes(text)?,
                _ => return Err(CliError::Usage("give exactly one of --M or --amplitudes".into())),
            };
            cmd_sort(&input, coupling.coupling()?, *tau)
        }
        Command::Verify { m, perturb } => cmd_verify(*m, *perturb),
    }
}

pub fn cmd_spectrum(m: usize, coupling: Coupling, verify: bool) -> Result<Rendered, CliError> {
    check_photons(m)?;
    if verify {
        verify_subspace(m, coupling)?;
    }
    let sys = eigensystem(m, coupling);
    let mut header = vec!["x".to_string(), "E".to_string()];
    header.extend((0..=m).map(|n| format!("c_{n}")));
    let mut table = Table::new(header);
    let mut rows = Vec::new();
    for (x, (e, c)) in sys.eigenvalues.iter().zip(&sys.coefficients).enumerate() {
        let mut row = vec![x.to_string(), float(*e)];
        row.extend(c.iter().map(|v| float(*v)));
        table.push(row);
        rows.push(json!({ "x": x, "E": e, "coefficients": c }));
    }
    let gamma = coupling.gamma();
    Ok(Rendered {
        table,
        json: json!({ "M": m, "gamma_re": gamma.re, "gamma_im": gamma.im, "phase": coupling.phase(), "rows": rows }),
        plots: vec!["file using 1:2 with points pt 7 title 'E_x'".into()],
        axes: ("x", "E", format!("H0 spectrum, M = {m}")),
        summary: None,
    })
}

pub fn cmd_distribution(m: usize, energies: &[f64], verify: bool) -> Result<Rendered, CliError> {
    check_photons(m)?;
    if verify {
        verify_subspace(m, Coupling::real(1.0)?)?;
    }
    let mut table = Table::new(["E", "peaks", "n", "probability"]);
    let mut entries = Vec::new();
    let mut plots = Vec::new();
    for &energy in energies {
        let dist = eigenstate_distribution::<f64>(m, energy)?;
        let peaks = peak_count(&dist);
        for (n, w) in dist.weights().iter().enumerate() {
            table.push(vec![float(energy), peaks.to_string(), n.to_string(), float(*w)]);
        }
        entries.push(json!({ "E": energy, "peaks": peaks, "probabilities": dist.weights() }));
        plots.push(format!(
            "file using 3:(abs($1-({energy}))<1e-9 ? $4 : 1/0) every ::1 with linespoints title 'E = {energy}'"
        ));
    }
    Ok(Rendered {
        table,
        json: json!({ "M": m, "distributions": entries }),
        plots,
        axes: ("n", "|c_n|^2", format!("photon distribution, M = {m}")),
        summary: None,
    })
}

pub fn cmd_entropy(mode: EntropyMode, m: usize, m_min: usize, energy: Option<f64>) -> Result<Rendered, CliError> {
    check_photons(m)?;
    let (reports, skipped) = match mode {
        EntropyMode::VsE => (entropy_vs_e::<f64>(m), Vec::new()),
        EntropyMode::VsM => {
            if m_min > m {
                return Err(twomode::Error::EmptyRange.into());
            }
            let rule = energy.map_or(EnergyRule::Max, EnergyRule::Fixed);
            let table = entropy_vs_m(rule, m_min..=m)?;
            (table.reports, table.skipped)
        }
    };
    let mut table = Table::new(["M", "E", "s_ent"]);
    let mut rows = Vec::new();
    for r in &reports {
        table.push(vec![r.total.to_string(), float(r.energy), float(r.s_ent)]);
        rows.push(json!({ "M": r.total, "E": r.energy, "s_ent": r.s_ent }));
    }
    let (plot, axes) = match mode {
        EntropyMode::VsE => (
            "file using 2:3 every ::1 with linespoints title 'S_ent'".to_string(),
            ("E", "S_ent (bits)", format!("entanglement against energy, M = {m}")),
        ),
        EntropyMode::VsM => (
            "file using 1:3 every ::1 with linespoints title 'S_ent'".to_string(),
            ("M", "S_ent (bits)", "entanglement against photon number".to_string()),
        ),
    };
    Ok(Rendered {
        table,
        json: json!({ "rows": rows, "skipped": skipped }),
        plots: vec![plot],
        axes,
        summary: (!skipped.is_empty()).then(|| format!("skipped off-lattice M: {skipped:?}")),
    })
}

pub fn cmd_evolve(spec: &Spec, m1: usize, m2: usize, t_max: f64, samples: usize, verify: bool) -> Result<Rendered, CliError> {
    let total = m1 + m2;
    check_photons(total)?;
    if !t_max.is_finite() {
        return Err(CliError::Usage(format!("--t-max must be finite, got {t_max}")));
    }
    if samples == 0 {
        return Err(CliError::Usage("--samples must be positive".into()));
    }
    if verify {
        verify_subspace(total, spec.coupling())?;
        let t = t_max.max(1.0);
        let gap = propagator(spec, total, t)
            .matrix
            .max_abs_diff(&dense_propagator(&nonlinear_matrix(spec, total).matrix, t)?);
        if gap >= 1e-8 {
            return Err(CliError::Verification(format!("propagator differs from dense exponential by {gap:e}")));
        }
    }
    let initial = State::fock(total, m2)?;
    let grid = uniform_grid(t_max, samples);
    let trajectory = n2_trajectory_with_states(spec, &initial, &grid)?;
    let mut table = Table::new(["t", "n2_expectation"]);
    let mut json_samples = Vec::new();
    for s in &trajectory {
        table.push(vec![float(s.t), float(s.n2_expectation)]);
        let amps: Vec<[f64; 2]> = s
            .state
            .as_ref()
            .map(|st| st.amplitudes().iter().map(|z| [z.re, z.im]).collect())
            .unwrap_or_default();
        json_samples.push(json!({ "t": s.t, "n2_expectation": s.n2_expectation, "amplitudes": amps }));
    }
    let label = spec.design().map(|d| d.kind.label()).unwrap_or("custom");
    Ok(Rendered {
        table,
        json: json!({
            "design": label,
            "initial": [m1, m2],
            "hamiltonian": serde_json::from_str::<serde_json::Value>(&spec.to_json()).expect("valid json"),
            "samples": json_samples,
        }),
        plots: vec![format!("file using 1:2 every ::1 with lines title '|{m1},{m2}>'")],
        axes: ("t", "<n_2>", format!("{label}, initial |{m1},{m2}>")),
        summary: None,
    })
}

#[derive(Serialize)]
struct AmplitudeEntry {
    n1: usize,
    n2: usize,
    re: f64,
    im: f64,
}

pub fn cmd_cat(alpha: Complex64, coupling: Coupling, tau: f64, epsilon: f64) -> Result<Rendered, CliError> {
    let cat = cat_from_coherent(alpha, coupling, tau, epsilon)?;
    let mut table = Table::new(["M", "n1", "n2", "re", "im"]);
    let mut entries = Vec::new();
    for (total, block) in cat.evolved.blocks().iter().enumerate() {
        for (n, z) in block.iter().enumerate() {
            table.push(vec![total.to_string(), (total - n).to_string(), n.to_string(), float(z.re), float(z.im)]);
            entries.push(AmplitudeEntry {
                n1: total - n,
                n2: n,
                re: z.re,
                im: z.im,
            });
        }
    }
    Ok(Rendered {
        table,
        json: json!({
            "alpha_re": alpha.re,
            "alpha_im": alpha.im,
            "cutoff": cat.coherent.cutoff,
            "discarded_weight": cat.coherent.discarded_weight,
            "fidelity": cat.fidelity,
            "amplitudes": entries,
        }),
        plots: Vec::new(),
        axes: ("", "", String::new()),
        summary: Some(format!(
            "fidelity {} (cutoff {}, discarded weight {:e})",
            float(cat.fidelity),
            cat.coherent.cutoff,
            cat.coherent.discarded_weight
        )),
    })
}

pub fn cmd_sort(input: &[Complex64], coupling: Coupling, tau: f64) -> Result<Rendered, CliError> {
    let out = sort_cascade(input, coupling, tau)?.pruned(1e-14);
    let mut table = Table::new(["n1", "n2", "n3", "n4", "re", "im"]);
    let mut entries = Vec::new();
    for (occ, z) in out.iter() {
        let mut row: Vec<String> = occ.iter().map(|n| n.to_string()).collect();
        row.push(float(z.re));
        row.push(float(z.im));
        table.push(row);
        entries.push(json!({ "occupation": occ, "re": z.re, "im": z.im }));
    }
    Ok(Rendered {
        table,
        json: json!({ "amplitudes": entries }),
        plots: Vec::new(),
        axes: ("", "", String::new()),
        summary: None,
    })
}

/// Per subspace: oracle spectrum agreement, unitarity of the designed
/// propagators, and (for M ≤ 20) agreement with the dense exponential.
pub fn cmd_verify(m_max: usize, perturb: bool) -> Result<Rendered, CliError> {
    check_photons(m_max)?;
    let coupling = Coupling::real(1.0)?;
    let specs = [
        design_lswap(coupling, 1.0)?,
        design_evenswap(coupling, 1.0)?,
        design_pswap(coupling, 1.0, 1, false)?,
        design_pswap(coupling, 1.0, 2, true)?,
    ];
    let mut table = Table::new([
        "M",
        "max_eigenvalue_gap",
        "max_vector_gap",
        "max_unitarity_defect",
        "max_propagator_gap",
        "pass",
    ]);
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for m in 0..=m_max {
        let (ev, vec) = cross_check(m, coupling, perturb && m == m_max)?;
        let mut unitarity = 0.0f64;
        let mut prop_gap = 0.0f64;
        for spec in &specs {
            let u = propagator(spec, m, 0.731);
            unitarity = unitarity.max(u.unitarity_defect());
            if m <= 20 {
                let dense = dense_propagator(&nonlinear_matrix(spec, m).matrix, 0.731)?;
                prop_gap = prop_gap.max(u.matrix.max_abs_diff(&dense));
            }
        }
        let pass = ev < 1e-9 && vec < 1e-8 && unitarity < 1e-10 && prop_gap < 1e-8;
        if !pass {
            failures.push(m);
        }
        table.push(vec![m.to_string(), float(ev), float(vec), float(unitarity), float(prop_gap), pass.to_string()]);
        rows.push(json!({
            "M": m,
            "max_eigenvalue_gap": ev,
            "max_vector_gap": vec,
            "max_unitarity_defect": unitarity,
            "max_propagator_gap": prop_gap,
            "pass": pass,
        }));
    }
    let summary = if failures.is_empty() {
        format!("all {} subspaces pass", m_max + 1)
    } else {
        format!("failing subspaces: {failures:?}")
    };
    Ok(Rendered {
        table,
        json: json!({ "rows": rows, "pass": failures.is_empty() }),
        plots: Vec::new(),
        axes: ("", "", String::new()),
        summary: Some(summary),
    })
}

/// Writes the rendered output; returns a verification error when `verify`
/// reported failing subspaces.
pub fn emit(cli: &Cli, rendered: &Rendered) -> Result<(), CliError> {
    let body = match cli.format {
        Format::Csv => rendered.table.to_csv(),
        Format::Json => {
            let mut text = serde_json::to_string_pretty(&rendered.json).expect("json serializes");
            text.push('\n');
            text
        }
    };
    match &cli.out {
        Some(path) => std::fs::write(path, &body)?,
        None => print!("{body}"),
    }
    if let Some(script) = &cli.plot {
        let csv = match (&cli.out, cli.format) {
            (Some(path), Format::Csv) => path.display().to_string(),
            _ => return Err(CliError::Usage("--plot needs --out with --format csv".into())),
        };
        if rendered.plots.is_empty() {
            return Err(CliError::Usage("this command has nothing to plot".into()));
        }
        let (x, y, title) = &rendered.axes;
        std::fs::write(script, gnuplot_script(&csv, title, x, y, &rendered.plots))?;
    }
    if let Some(summary) = &rendered.summary {
        eprintln!("{summary}");
    }
    if matches!(cli.command, Command::Verify { .. }) && rendered.json["pass"] == json!(false) {
        return Err(CliError::Verification(rendered.summary.clone().unwrap_or_default()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_initial_pairs() {
        assert_eq!(parse_initial("8,2").unwrap(), (8, 2));
        assert_eq!(parse_initial(" 9 , 2 ").unwrap(), (9, 2));
        assert!(parse_initial("9").is_err());
        assert!(parse_initial("a,2").is_err());
    }

    #[test]
    fn parses_complex_amplitudes() {
        let v = parse_amplitudes("0,0.6,0.8i").unwrap();
        assert_eq!(v, vec![Complex64::new(0.0, 0.0), Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]);
        assert!(parse_amplitudes("0,x").is_err());
    }

    #[test]
    fn spectrum_rows() {
        let r = cmd_spectrum(2, Coupling::real(1.0).unwrap(), true).unwrap();
        let csv = r.table.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "x,E,c_0,c_1,c_2");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("0,-2.0000000000000000e0,"));
        assert!(lines[3].starts_with("2,2.0000000000000000e0,"));
    }

    #[test]
    fn verify_negative_control() {
        let ok = cmd_verify(3, false).unwrap();
        assert_eq!(ok.json["pass"], json!(true));
        let bad = cmd_verify(3, true).unwrap();
        assert_eq!(bad.json["pass"], json!(false));
    }
}
