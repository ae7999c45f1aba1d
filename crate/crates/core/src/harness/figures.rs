//! Figure tables: one CSV per figure plus a matplotlib stub that plots it.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use crate::basis::LocalSpin;
use crate::error::{Error, Result};
use crate::harness::config::Experiment;
use crate::harness::run::{AggregateResult, PointResult};

/// Every figure id understood by [`emit_figure_data`].
pub const FIGURES: [&str; 11] = ["fig2", "fig3", "fig4", "fig5", "fig6", "fig9", "fig10a", "fig10b", "fig11", "fig12", "fig17"];

fn source(figure: &str) -> Option<(Experiment, Option<LocalSpin>)> {
    let half = Some(LocalSpin::Half);
    let one = Some(LocalSpin::One);
    Some(match figure {
        "fig2" | "fig4" => (Experiment::Dynamics, half),
        "fig5" => (Experiment::Dynamics, one),
        "fig3" => (Experiment::DecayTimes, half),
        "fig6" => (Experiment::DecayTimes, one),
        "fig9" => (Experiment::LevelRatio, None),
        "fig10a" => (Experiment::Pairing, half),
        "fig10b" => (Experiment::Pairing, one),
        "fig11" => (Experiment::PairingVsL, None),
        "fig12" => (Experiment::Correlations, None),
        "fig17" => (Experiment::ImbalanceDist, None),
        _ => return None,
    })
}

/// Figures a result can feed.
pub fn figures_for(result: &AggregateResult) -> Vec<&'static str> {
    FIGURES
        .into_iter()
        .filter(|f| {
            let (experiment, spin) = source(f).unwrap();
            experiment == result.config.experiment && spin.is_none_or(|s| s == result.config.spin)
        })
        .collect()
}

fn sign(t: u64) -> f64 {
    if t % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn dynamics_rows(points: &[PointResult], out: &mut String, row: impl Fn(&PointResult, usize, &mut String)) {
    for p in points {
        if let Some(series) = &p.series {
            for i in 0..series.times.len() {
                row(p, i, out);
            }
        }
    }
}

fn table(result: &AggregateResult, figure: &str) -> String {
    let points = &result.points;
    let initial = &result.config.initial_state;
    let mut s = String::new();
    match figure {
        "fig2" => {
            s.push_str("L,J,epsilon,initial_state,t,pd_z_mean,pd_z_stderr,pd_z_normalized\n");
            dynamics_rows(points, &mut s, |p, i, s| {
                let series = p.series.as_ref().unwrap();
                let t = series.times[i];
                let z = sign(t) * series.z_mean[i];
                let _ = writeln!(
                    s,
                    "{},{},{},{initial},{t},{z},{},{}",
                    p.point.length,
                    p.point.j,
                    p.point.epsilon,
                    series.z_stderr[i],
                    z / series.z_mean[0]
                );
            });
        }
        "fig4" => {
            // sites L - floor(L/4) and floor(L/4), counted from 1
            s.push_str("L,J,t,m_ferro,pd_m_af\n");
            dynamics_rows(points, &mut s, |p, i, s| {
                let series = p.series.as_ref().unwrap();
                let l = p.point.length;
                let (ferro, af) = (l - l / 4 - 1, (l / 4).max(1) - 1);
                let t = series.times[i];
                let m = &series.m_mean[i];
                let _ = writeln!(s, "{l},{},{t},{},{}", p.point.j, m[ferro], sign(t) * m[af]);
            });
        }
        "fig5" => {
            // sites 2 floor(L/4) and 2 floor(L/4) + 1, counted from 1
            s.push_str("L,J,t,pd_z_mean,pd_z_stderr,m_a_folded,m_b_folded\n");
            dynamics_rows(points, &mut s, |p, i, s| {
                let series = p.series.as_ref().unwrap();
                let l = p.point.length;
                let a = (2 * (l / 4)).max(1) - 1;
                let t = series.times[i];
                let m = &series.m_mean[i];
                let fold = |x: f64| sign(t) * (x - 0.5) + 0.5;
                let _ = writeln!(
                    s,
                    "{l},{},{t},{},{},{},{}",
                    p.point.j,
                    sign(t) * series.z_mean[i],
                    series.z_stderr[i],
                    fold(m[a]),
                    fold(m[a + 1])
                );
            });
        }
        "fig3" | "fig6" => {
            s.push_str("L,tau_mean,tau_stderr,J,alpha\n");
            for p in points {
                let _ = writeln!(s, "{},{},{},{},{}", p.point.length, p.mean, p.stderr, p.point.j, p.point.alpha);
            }
        }
        "fig9" => {
            s.push_str("J,L,r_mean,r_stderr,alpha\n");
            for p in points {
                let _ = writeln!(s, "{},{},{},{},{}", p.point.j, p.point.length, p.mean, p.stderr, p.point.alpha);
            }
        }
        "fig10a" | "fig10b" => {
            s.push_str("J,L,ell_delta,stderr\n");
            for p in points {
                let _ = writeln!(s, "{},{},{},{}", p.point.j, p.point.length, p.mean, p.stderr);
            }
        }
        "fig11" => {
            s.push_str("L,J,epsilon,ell_delta,stderr\n");
            for p in points {
                let _ = writeln!(s, "{},{},{},{},{}", p.point.length, p.point.j, p.point.epsilon, p.mean, p.stderr);
            }
        }
        "fig12" => {
            s.push_str("L,J,sigma_mean,sigma_stderr\n");
            for p in points {
                let _ = writeln!(s, "{},{},{},{}", p.point.length, p.point.j, p.mean, p.stderr);
            }
        }
        "fig17" => {
            s.push_str("d,L,I_LI,pmf_exact,pmf_normal\n");
            for t in &result.imbalance {
                for i in 0..t.support.len() {
                    let _ = writeln!(s, "{},{},{},{},{}", t.d, t.length, t.support[i], t.pmf_exact[i], t.pmf_normal[i]);
                }
            }
        }
        _ => unreachable!(),
    }
    s
}

fn plot_stub(figure: &str) -> String {
    let (x, y, group, log_x) = match figure {
        "fig2" => ("t", "pd_z_normalized", "L", true),
        "fig4" => ("t", "pd_m_af", "L", true),
        "fig5" => ("t", "pd_z_mean", "L", true),
        "fig3" | "fig6" => ("L", "tau_mean", "J", false),
        "fig9" => ("J", "r_mean", "L", true),
        "fig10a" | "fig10b" => ("J", "ell_delta", "L", true),
        "fig11" => ("L", "ell_delta", "J", false),
        "fig12" => ("L", "sigma_mean", "J", false),
        _ => ("I_LI", "pmf_exact", "d", false),
    };
    let scale = if log_x { "ax.set_xscale(\"log\")\n" } else { "" };
    let logy = if matches!(figure, "fig3" | "fig6") { "ax.set_yscale(\"log\")\n" } else { "" };
    format!(
        "import pandas as pd\nimport matplotlib.pyplot as plt\n\n\
         df = pd.read_csv(\"{figure}.csv\")\nfig, ax = plt.subplots()\n\
         for key, g in df.groupby(\"{group}\"):\n    ax.plot(g[\"{x}\"], g[\"{y}\"], marker=\".\", label=f\"{group}={{key}}\")\n\
         {scale}{logy}ax.set_xlabel(\"{x}\")\nax.set_ylabel(\"{y}\")\nax.legend()\nfig.savefig(\"{figure}.pdf\")\n"
    )
}

/// Write `<figure>.csv` and `<figure>.py` into the experiment directory.
pub fn emit_figure_data(result: &AggregateResult, figure: &str) -> Result<Vec<PathBuf>> {
    let (experiment, spin) = source(figure).ok_or_else(|| Error::UnknownFigure(figure.to_string()))?;
    if experiment != result.config.experiment {
        return Err(Error::Config(format!(
            "{figure} needs a {experiment} result, got {}",
            result.config.experiment
        )));
    }
    if let Some(s) = spin {
        if s != result.config.spin {
            return Err(Error::Config(format!("{figure} needs spin-{s} data")));
        }
    }
    let dir = result.experiment_dir();
    fs::create_dir_all(&dir).map_err(|source| Error::Io { path: dir.clone(), source })?;
    let mut files = Vec::new();
    for (name, text) in [(format!("{figure}.csv"), table(result, figure)), (format!("{figure}.py"), plot_stub(figure))] {
        let path = dir.join(name);
        fs::write(&path, text).map_err(|source| Error::Io { path: path.clone(), source })?;
        files.push(path);
    }
    Ok(files)
}
