//! Lattice-path model of the chain complex.
//!
//! A generator is a concave lattice path made of three pieces: the upper hull
//! of the lattice points left of an anchor `(Q, P)`, a segment of slope
//! `−p/q` running `m` steps of `(q, −p)` from the anchor, and the upper hull
//! of the points right of the segment. Paths are stored as
//! `(anchor, m, label)` and the hulls are rebuilt on demand.

use std::fmt::Write as _;

use serde::Serialize;

use crate::current::{KnotParams, ReebCurrent};
use crate::error::{Error, Result};
use crate::lattice::chain_hull;
use crate::numeric::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentLabel {
    E,
    H,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LatticePath {
    /// Upper endpoint `(Q, P)` of the slope `−p/q` segment.
    pub anchor: (i64, i64),
    /// Lattice length of the segment.
    pub m: u32,
    pub label: SegmentLabel,
    #[serde(skip)]
    pub kp: KnotParams,
}

impl LatticePath {
    pub fn new(kp: KnotParams, anchor: (i64, i64), m: u32, label: SegmentLabel) -> Result<Self> {
        if anchor.0 < 0 || anchor.1 < 0 {
            return Err(Error::InvalidArgument(
                "anchor must lie in the first quadrant".into(),
            ));
        }
        if anchor.1 < m as i64 * kp.p() {
            return Err(Error::InvalidArgument(format!(
                "segment of length {m} from {anchor:?} leaves the quadrant"
            )));
        }
        if m == 0 && label == SegmentLabel::H {
            return Err(Error::InvalidArgument(
                "an h label needs a nondegenerate segment".into(),
            ));
        }
        Ok(LatticePath {
            anchor,
            m,
            label,
            kp,
        })
    }

    /// Inverse of [`path_to_current`].
    pub fn from_current(c: &ReebCurrent, kp: &KnotParams) -> Result<Self> {
        if !c.is_admissible() {
            return Err(Error::InvalidArgument(format!("{c} is not admissible")));
        }
        let m = c.b + c.h;
        let anchor = (c.q as i64, c.p as i64 + m as i64 * kp.p());
        let label = if c.h == 1 {
            SegmentLabel::H
        } else {
            SegmentLabel::E
        };
        LatticePath::new(*kp, anchor, m, label)
    }

    /// Value of `px + qy` along the segment.
    pub fn level(&self) -> i64 {
        self.kp.p() * self.anchor.0 + self.kp.q() * self.anchor.1
    }

    /// Value of `x/q + y/p` along the segment.
    pub fn segment_action(&self) -> Rat {
        Rat::new(self.level(), self.kp.pq())
    }

    pub fn segment_end(&self) -> (i64, i64) {
        let m = self.m as i64;
        (
            self.anchor.0 + m * self.kp.q(),
            self.anchor.1 - m * self.kp.p(),
        )
    }

    /// Highest lattice point strictly below the segment's line in column `x`.
    fn column_top(&self, x: i64) -> Option<i64> {
        let room = self.level() - 1 - self.kp.p() * x;
        (room >= 0).then(|| room.div_euclid(self.kp.q()))
    }

    fn last_column(&self) -> i64 {
        let below = (self.level() - 1).div_euclid(self.kp.p());
        below.max(self.segment_end().0)
    }

    /// Corners of the path from the `y`-axis to its right end.
    pub fn vertices(&self) -> Vec<(i64, i64)> {
        let start = self.anchor;
        let end = self.segment_end();
        let left: Vec<(i64, i64)> = (0..start.0)
            .filter_map(|x| self.column_top(x).map(|y| (x, y)))
            .chain(std::iter::once(start))
            .collect();
        let right: Vec<(i64, i64)> = std::iter::once(end)
            .chain(
                ((end.0 + 1)..=self.last_column())
                    .filter_map(|x| self.column_top(x).map(|y| (x, y))),
            )
            .collect();
        let mut out = chain_hull(&left, true);
        let right = chain_hull(&right, true);
        if self.m == 0 {
            out.extend_from_slice(&right[1..]);
        } else {
            out.extend_from_slice(&right);
        }
        out
    }

    /// Lattice points between the path and the axes, inclusive.
    pub fn lattice_points_under(&self) -> i64 {
        polyline_column_heights(&self.vertices())
            .iter()
            .map(|h| h + 1)
            .sum()
    }

    pub fn region(&self) -> Vec<(i64, i64)> {
        polyline_column_heights(&self.vertices())
            .into_iter()
            .enumerate()
            .flat_map(|(x, h)| (0..=h).map(move |y| (x as i64, y)))
            .collect()
    }
}

/// `⌊y(x)⌋` for every integer column under an x-monotone polyline starting
/// on the `y`-axis.
fn polyline_column_heights(vertices: &[(i64, i64)]) -> Vec<i64> {
    let Some(&(x0, y0)) = vertices.first() else {
        return Vec::new();
    };
    debug_assert_eq!(x0, 0);
    let mut heights = vec![y0];
    for w in vertices.windows(2) {
        let ((x1, y1), (x2, y2)) = (w[0], w[1]);
        for x in (x1 + 1)..=x2 {
            heights.push(y1 + ((y2 - y1) * (x - x1)).div_euclid(x2 - x1));
        }
    }
    heights
}

/// `label e → b^m p^{P−mp} q^Q`, `label h → b^{m−1} h p^{P−mp} q^Q`.
pub fn path_to_current(path: &LatticePath) -> Result<ReebCurrent> {
    let m = path.m;
    let p_exp = path.anchor.1 - m as i64 * path.kp.p();
    if p_exp < 0 {
        return Err(Error::InvalidArgument("segment leaves the quadrant".into()));
    }
    let (b, h) = match path.label {
        SegmentLabel::E => (m, 0),
        SegmentLabel::H if m == 0 => {
            return Err(Error::InvalidArgument(
                "an h label needs a nondegenerate segment".into(),
            ))
        }
        SegmentLabel::H => (m - 1, 1),
    };
    Ok(ReebCurrent::new(b, h, p_exp as u32, path.anchor.0 as u32))
}

/// `2(L(Λ) − 1) − h(Λ)` with `L` the lattice-point count under the path.
pub fn path_index(path: &LatticePath) -> i64 {
    let h = i64::from(path.label == SegmentLabel::H);
    2 * (path.lattice_points_under() - 1) - h
}

/// Reads a path back from a lattice region: the segment is the set of
/// region points maximizing `px + qy`.
fn path_from_region(kp: &KnotParams, region: &[(i64, i64)]) -> Result<LatticePath> {
    let value = |pt: &(i64, i64)| kp.p() * pt.0 + kp.q() * pt.1;
    let top = region.iter().map(value).max().unwrap_or(0);
    let mut on_line: Vec<(i64, i64)> = region
        .iter()
        .copied()
        .filter(|pt| value(pt) == top)
        .collect();
    on_line.sort_unstable();
    let anchor = on_line[0];
    LatticePath::new(*kp, anchor, (on_line.len() - 1) as u32, SegmentLabel::E)
}

/// Removes `corner` from the region under `path`, takes the hull of what is
/// left and checks that the hull adds no lattice points back.
fn round_off(path: &LatticePath, corner: (i64, i64)) -> Result<LatticePath> {
    let region: Vec<(i64, i64)> = path
        .region()
        .into_iter()
        .filter(|&pt| pt != corner)
        .collect();
    let mut tops: Vec<(i64, i64)> = Vec::new();
    for &(x, y) in &region {
        match tops.last_mut() {
            Some(last) if last.0 == x => last.1 = last.1.max(y),
            _ => tops.push((x, y)),
        }
    }
    let hull = chain_hull(&tops, true);
    let refilled: i64 = polyline_column_heights(&hull).iter().map(|h| h + 1).sum();
    if refilled != region.len() as i64 {
        return Err(Error::Inconsistency(format!(
            "rounding {corner:?} is not a lattice-convex region"
        )));
    }
    let rounded = path_from_region(&path.kp, &region)?;
    if rounded.region() != region {
        return Err(Error::Inconsistency(format!(
            "rounded region at {corner:?} does not match its canonical path"
        )));
    }
    Ok(rounded)
}

/// Differential of an `h`-labelled path: `(Λ_q, Λ_p)`, obtained by rounding
/// the upper and the lower corner of the segment respectively.
pub fn round_corner(path: &LatticePath) -> Result<(LatticePath, LatticePath)> {
    if path.label != SegmentLabel::H {
        return Err(Error::InvalidArgument("paths labelled e are closed".into()));
    }
    let lambda_q = round_off(path, path.anchor)?;
    let lambda_p = round_off(path, path.segment_end())?;
    Ok((lambda_q, lambda_p))
}

/// Static SVG sketch of a path over its lattice region.
pub fn render_svg(path: &LatticePath) -> String {
    let verts = path.vertices();
    let region = path.region();
    let max_x = region.iter().map(|p| p.0).max().unwrap_or(0).max(1);
    let max_y = region.iter().map(|p| p.1).max().unwrap_or(0).max(1);
    let unit = 40.0;
    let pad = 20.0;
    let w = max_x as f64 * unit + 2.0 * pad;
    let h = max_y as f64 * unit + 2.0 * pad;
    let sx = |x: f64| pad + x * unit;
    let sy = |y: f64| h - pad - y * unit;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    for (x, y) in &region {
        let _ = writeln!(
            s,
            r#"<circle cx="{}" cy="{}" r="3" fill="black"/>"#,
            sx(*x as f64),
            sy(*y as f64)
        );
    }
    // Level line of slope −p/q through the anchor.
    let (p, q) = (path.kp.p() as f64, path.kp.q() as f64);
    let level = path.level() as f64;
    let _ = writeln!(
        s,
        r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#7ec8e3" stroke-dasharray="6,4"/>"##,
        sx(0.0),
        sy(level / q),
        sx(level / p),
        sy(0.0)
    );
    let points: Vec<String> = verts
        .iter()
        .map(|(x, y)| format!("{},{}", sx(*x as f64), sy(*y as f64)))
        .collect();
    let _ = writeln!(
        s,
        r#"<polyline points="{}" fill="none" stroke="red" stroke-width="2"/>"#,
        points.join(" ")
    );
    let (a, b) = (path.anchor, path.segment_end());
    let _ = writeln!(
        s,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="blue" stroke-width="3"/>"#,
        sx(a.0 as f64),
        sy(a.1 as f64),
        sx(b.0 as f64),
        sy(b.1 as f64)
    );
    if path.m > 0 {
        let label = match path.label {
            SegmentLabel::E => "e",
            SegmentLabel::H => "h",
        };
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="serif" font-size="16">{label}</text>"#,
            sx((a.0 + b.0) as f64 / 2.0) + 6.0,
            sy((a.1 + b.1) as f64 / 2.0) - 6.0
        );
    }
    s.push_str("</svg>\n");
    s
}
