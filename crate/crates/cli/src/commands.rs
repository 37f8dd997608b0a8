use std::fs;
use std::io;
use std::path::Path;

use serde_json::json;
use thiserror::Error;
use torus_ech::complex::{self, ComplexSpec};
use torus_ech::index::cz_table;
use torus_ech::lattice::NSeq;
use torus_ech::spectral::{self, Obstruction, RotationMode};
use torus_ech::toric::{self, path_index, LatticePath};
use torus_ech::{InfRat, KnotParams, Rat, ReebCurrent};

use crate::report::{Metadata, Report};
use crate::{BoundKind, Command, Knot, Rotation, ToricKind};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] torus_ech::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Library(_) => 2,
            CliError::Io { .. } => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn knot(k: &Knot) -> Result<KnotParams> {
    Ok(KnotParams::new(k.p, k.q)?)
}

fn rat(flag: &str, s: &str) -> Result<Rat> {
    s.parse()
        .map_err(|_| CliError::Usage(format!("--{flag}: cannot parse `{s}` as a rational")))
}

fn pair(flag: &str, s: &str) -> Result<KnotParams> {
    let bad = || CliError::Usage(format!("--{flag}: expected P,Q but got `{s}`"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let p = a.trim().parse().map_err(|_| bad())?;
    let q = b.trim().parse().map_err(|_| bad())?;
    Ok(KnotParams::new(p, q)?)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn decimal(x: f64) -> String {
    format!("{x:.15}")
}

fn positive(flag: &str, n: i64) -> Result<()> {
    if n <= 0 {
        return Err(CliError::Usage(format!("--{flag} must be positive")));
    }
    Ok(())
}

pub fn run(command: &Command) -> Result<Report> {
    match command {
        Command::Generators {
            knot: k,
            max_degree,
        } => generators(knot(k)?, *max_degree),
        Command::CzTable {
            knot: k,
            max_action,
        } => cz(knot(k)?, &rat("max-action", max_action)?),
        Command::Homology {
            knot: k,
            max_index,
            max_degree,
            check_d_squared,
        } => homology(knot(k)?, *max_index, *max_degree, *check_d_squared),
        Command::KnotFiltered {
            knot: k,
            max_index,
            level,
            max_degree,
        } => {
            let level: InfRat = level
                .parse()
                .map_err(|_| CliError::Usage(format!("--level: cannot parse `{level}`")))?;
            knot_filtered(knot(k)?, *max_index, &level, *max_degree)
        }
        Command::Spectrum {
            knot: k,
            k_max,
            rotation,
            ..
        } => spectrum(knot(k)?, *k_max, *rotation),
        Command::Nseq { knot: k, k_max } => nseq(knot(k)?, *k_max),
        Command::Obstruct { from, to, k_max } => {
            obstruct(pair("from", from)?, pair("to", to)?, *k_max)
        }
        Command::Bounds { kind } => bounds(kind),
        Command::Toric { kind } => toric_cmd(kind),
        Command::Weyl {
            knot: k,
            k_min,
            k_max,
            plot_data,
        } => weyl(knot(k)?, *k_min, *k_max, plot_data.as_deref()),
    }
}

fn generators(kp: KnotParams, max_degree: i64) -> Result<Report> {
    positive("max-degree", max_degree)?;
    let spec = ComplexSpec::new(kp, max_degree)?;
    let mut gens = complex::enumerate(&spec);
    gens.sort_by(|a, b| (a.degree, a.index, &a.name).cmp(&(b.degree, b.index, &b.name)));
    let mut r = Report::new(
        Metadata::new(&kp, json!({ "maxDegree": max_degree })),
        vec!["degree", "generator", "index"],
    );
    r.rows = gens
        .iter()
        .map(|g| vec![g.degree.to_string(), g.name.clone(), g.index.to_string()])
        .collect();
    r.json = json!(gens
        .iter()
        .map(|g| json!({
            "degree": g.degree,
            "generator": g.name,
            "index": g.index,
            "filtration": g.filtration.to_string(),
        }))
        .collect::<Vec<_>>());
    Ok(r)
}

fn cz(kp: KnotParams, max_action: &Rat) -> Result<Report> {
    let rows = cz_table(&kp, max_action);
    let mut r = Report::new(
        Metadata::new(&kp, json!({ "maxAction": max_action.to_string() })),
        vec!["orbit", "action", "cz_orb"],
    );
    r.rows = rows
        .iter()
        .map(|c| vec![c.name(), c.action.to_string(), c.cz.to_string()])
        .collect();
    r.json = json!(rows
        .iter()
        .map(|c| json!({ "orbit": c.name(), "action": c.action.to_string(), "czOrb": c.cz }))
        .collect::<Vec<_>>());
    Ok(r)
}

fn degree_window(kp: &KnotParams, max_index: i64, max_degree: Option<i64>) -> Result<ComplexSpec> {
    if max_index < 0 {
        return Err(CliError::Usage("--max-index must be nonnegative".into()));
    }
    let degree = max_degree.unwrap_or_else(|| ComplexSpec::required_degree(kp, max_index));
    Ok(ComplexSpec::new(*kp, degree)?)
}

fn rank_rows(r: &mut Report, ranks: &std::collections::BTreeMap<i64, usize>) {
    r.rows = ranks
        .iter()
        .map(|(i, n)| vec![i.to_string(), n.to_string()])
        .collect();
    r.json = json!(ranks
        .iter()
        .map(|(i, n)| json!({ "index": i, "rank": n }))
        .collect::<Vec<_>>());
}

fn homology(
    kp: KnotParams,
    max_index: i64,
    max_degree: Option<i64>,
    check: bool,
) -> Result<Report> {
    let spec = degree_window(&kp, max_index, max_degree)?;
    let cx = complex::differential(&spec);
    let ranks = cx.homology(max_index)?;
    let mut r = Report::new(
        Metadata::new(
            &kp,
            json!({ "maxIndex": max_index, "maxDegree": spec.max_degree }),
        ),
        vec!["index", "rank"],
    );
    rank_rows(&mut r, &ranks);
    if check {
        let zero = cx.boundary.squares_to_zero();
        r.notes.push(format!("d^2 = 0: {zero}"));
        r.json = json!({ "ranks": r.json, "dSquaredZero": zero });
        r.ok = zero;
    }
    Ok(r)
}

fn knot_filtered(
    kp: KnotParams,
    max_index: i64,
    level: &InfRat,
    max_degree: Option<i64>,
) -> Result<Report> {
    let spec = degree_window(&kp, max_index, max_degree)?;
    let ranks = complex::knot_filtered_homology(&spec, level, max_index)?;
    let mut r = Report::new(
        Metadata::new(
            &kp,
            json!({ "maxIndex": max_index, "maxDegree": spec.max_degree, "level": level.to_string() }),
        ),
        vec!["index", "rank"],
    );
    rank_rows(&mut r, &ranks);
    Ok(r)
}

fn spectrum(kp: KnotParams, k_max: u64, rotation: Rotation) -> Result<Report> {
    let entries = spectral::action_spectrum(&kp, k_max);
    let mode = match rotation {
        Rotation::Exact => RotationMode::ExactPq,
        Rotation::Delta => RotationMode::PqPlusDelta,
    };
    let link = spectral::linking_spectrum(&kp, k_max, mode);
    let mut r = Report::new(
        Metadata::new(&kp, json!({ "kMax": k_max, "rotation": mode })),
        vec!["k", "c_k", "c_k_link", "e_k"],
    );
    r.rows = entries
        .iter()
        .zip(&link)
        .map(|(e, l)| {
            vec![
                e.k.to_string(),
                e.ck.to_string(),
                l.to_string(),
                decimal(e.weyl_error.midpoint()),
            ]
        })
        .collect();
    r.json = json!(entries
        .iter()
        .zip(&link)
        .map(|(e, l)| json!({
            "k": e.k,
            "ck": e.ck.to_string(),
            "ckLink": l.to_string(),
            "ek": e.weyl_error.midpoint(),
            "ekInterval": [e.weyl_error.lower.to_string(), e.weyl_error.upper.to_string()],
        }))
        .collect::<Vec<_>>());
    Ok(r)
}

fn nseq(kp: KnotParams, k_max: u64) -> Result<Report> {
    let seq = NSeq::with_len(kp, k_max as usize + 1);
    let mut r = Report::new(
        Metadata::new(&kp, json!({ "kMax": k_max })),
        vec!["k", "N_k", "repeats"],
    );
    r.rows = seq
        .values()
        .iter()
        .zip(seq.repeat_counts())
        .enumerate()
        .map(|(k, (n, m))| vec![k.to_string(), n.to_string(), m.to_string()])
        .collect();
    r.json = json!(seq
        .values()
        .iter()
        .zip(seq.repeat_counts())
        .enumerate()
        .map(|(k, (n, m))| json!({ "k": k, "N_k": n, "repeats": m }))
        .collect::<Vec<_>>());
    Ok(r)
}

fn obstruct(from: KnotParams, to: KnotParams, k_max: u64) -> Result<Report> {
    let verdict = spectral::cobordism_obstruction(&from, &to, k_max);
    let text = match verdict {
        Obstruction::ObstructedAt { k } => format!("obstructed at k={k}"),
        Obstruction::Consistent { k_max } => format!("consistent through k={k_max}"),
        Obstruction::NotApplicable => "not applicable: pq < p'q'".to_string(),
    };
    let mut r = Report::new(
        Metadata::new(&from, json!({ "kMax": k_max, "to": [to.p(), to.q()] })),
        Vec::new(),
    );
    r.notes.push(text);
    r.json = json!(verdict);
    Ok(r)
}

fn bounds(kind: &BoundKind) -> Result<Report> {
    let (kp, result, cutoffs) = match kind {
        BoundKind::ActionLinking {
            knot: k,
            delta,
            volume,
            action_b,
        } => {
            let kp = knot(k)?;
            let (d, v, a) = (
                rat("delta", delta)?,
                rat("volume", volume)?,
                rat("action-b", action_b)?,
            );
            let res = spectral::action_linking_bound(&kp, &d, &v, &a)?;
            (
                kp,
                res,
                json!({ "delta": d.to_string(), "volume": v.to_string() }),
            )
        }
        BoundKind::Calabi { knot: k, d, calabi } => {
            if k.p < 2 || k.q < 2 {
                return Err(CliError::Usage("the Calabi bound needs p, q ≥ 2".into()));
            }
            let kp = knot(k)?;
            let (d, c) = (rat("d", d)?, rat("calabi", calabi)?);
            let res = spectral::calabi_mean_action_bound(&kp, &d, &c)?;
            (
                kp,
                res,
                json!({ "d": d.to_string(), "calabi": c.to_string() }),
            )
        }
    };
    let mut r = Report::new(
        Metadata::new(&kp, cutoffs),
        vec!["hypothesis_met", "threshold", "bound"],
    );
    r.rows = vec![vec![
        result.hypothesis_met.to_string(),
        result.threshold.to_string(),
        result.bound.map(decimal).unwrap_or_else(|| "-".into()),
    ]];
    r.json = json!({
        "hypothesisMet": result.hypothesis_met,
        "threshold": result.threshold.to_string(),
        "bound": result.bound,
    });
    Ok(r)
}

fn parse_current(s: &str) -> Result<ReebCurrent> {
    s.parse()
        .map_err(|_| CliError::Usage(format!("--current: cannot parse `{s}`")))
}

fn toric_cmd(kind: &ToricKind) -> Result<Report> {
    match kind {
        ToricKind::Path {
            knot: k,
            current,
            svg,
        } => {
            let kp = knot(k)?;
            let c = parse_current(current)?;
            let path = LatticePath::from_current(&c, &kp)?;
            if let Some(file) = svg {
                write_file(file, &toric::render_svg(&path))?;
            }
            let verts = path.vertices();
            let mut r = Report::new(
                Metadata::new(&kp, json!({ "current": c.canonical_name() })),
                vec!["x", "y"],
            );
            r.rows = verts
                .iter()
                .map(|(x, y)| vec![x.to_string(), y.to_string()])
                .collect();
            r.notes.push(format!("index: {}", path_index(&path)));
            r.json =
                json!({ "vertices": verts, "index": path_index(&path), "level": path.level() });
            Ok(r)
        }
        ToricKind::Round { knot: k, current } => {
            let kp = knot(k)?;
            let c = parse_current(current)?;
            let path = LatticePath::from_current(&c, &kp)?;
            let (lq, lp) = toric::round_corner(&path)?;
            let mut r = Report::new(
                Metadata::new(&kp, json!({ "current": c.canonical_name() })),
                vec!["rounding", "generator", "index"],
            );
            let mut json_rows = Vec::new();
            for (tag, l) in [("lambda_q", &lq), ("lambda_p", &lp)] {
                let g = toric::path_to_current(l)?;
                r.rows.push(vec![
                    tag.to_string(),
                    g.canonical_name(),
                    path_index(l).to_string(),
                ]);
                json_rows.push(json!({ "rounding": tag, "generator": g.canonical_name(), "index": path_index(l) }));
            }
            r.json = json!(json_rows);
            Ok(r)
        }
    }
}

fn weyl(kp: KnotParams, k_min: u64, k_max: u64, plot: Option<&Path>) -> Result<Report> {
    if k_min > k_max {
        return Err(CliError::Usage("--k-min exceeds --k-max".into()));
    }
    let scan = spectral::weyl_scan(&kp, k_min, k_max);
    if let Some(file) = plot {
        let mut body = String::from("k,e_k_lower,e_k_upper\n");
        for (k, e) in &scan.entries {
            body.push_str(&format!(
                "{k},{},{}\n",
                decimal(e.lower.to_f64()),
                decimal(e.upper.to_f64())
            ));
        }
        write_file(file, &body)?;
    }
    let envelope = Rat::new(kp.p() + kp.q() + 1, kp.pq());
    let mut r = Report::new(
        Metadata::new(&kp, json!({ "kMin": k_min, "kMax": k_max })),
        vec!["sup_abs_e_k", "attained_at", "envelope"],
    );
    r.rows = vec![vec![
        decimal(scan.sup_abs.to_f64()),
        scan.sup_at.to_string(),
        envelope.to_string(),
    ]];
    r.json = json!({
        "supAbsEk": scan.sup_abs.to_string(),
        "attainedAt": scan.sup_at,
        "envelope": envelope.to_string(),
    });
    Ok(r)
}
