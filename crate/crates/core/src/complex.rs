//! The Z/2 ECH chain complex below a degree cutoff.
//!
//! The only nonzero differentials are `∂(hγ) = p^p γ + q^q γ` for currents
//! `γ` without `h`. Homology is computed by left-to-right column reduction
//! of the boundary matrix, which also yields explicit bounding chains.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::current::{degree, knot_filtration, KnotParams, Orbit, ReebCurrent};
use crate::error::{Error, Result};
use crate::index::IndexTable;
use crate::lattice::nk;
use crate::numeric::InfRat;

/// Degree window standing in for the action window of the perturbed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexSpec {
    pub kp: KnotParams,
    pub max_degree: i64,
}

impl ComplexSpec {
    pub fn new(kp: KnotParams, max_degree: i64) -> Result<Self> {
        if max_degree < 0 {
            return Err(Error::InvalidArgument(
                "max degree must be nonnegative".into(),
            ));
        }
        Ok(ComplexSpec { kp, max_degree })
    }

    /// Smallest degree cutoff for which every generator of index at most
    /// `max_index + 1` is enumerated.
    pub fn required_degree(kp: &KnotParams, max_index: i64) -> i64 {
        nk(kp, ((max_index + 1).max(0) / 2) as u64)
    }

    fn check_window(&self, max_index: i64) -> Result<()> {
        if max_index < 0 {
            return Err(Error::InvalidArgument(
                "max index must be nonnegative".into(),
            ));
        }
        let required = Self::required_degree(&self.kp, max_index);
        if required > self.max_degree {
            return Err(Error::CutoffTooSmall {
                given: self.max_degree,
                required,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub current: ReebCurrent,
    pub name: String,
    pub degree: i64,
    pub index: i64,
    pub filtration: InfRat,
}

fn max_iterates(spec: &ComplexSpec) -> u32 {
    let kp = &spec.kp;
    (spec.max_degree / kp.p().min(kp.q())).max(0) as u32
}

/// All admissible currents of degree at most the cutoff, sorted by ECH index
/// and then canonical name.
pub fn enumerate(spec: &ComplexSpec) -> Vec<Generator> {
    let kp = spec.kp;
    let table = IndexTable::with_capacity(kp, max_iterates(spec));
    let (p, q, pq) = (kp.p(), kp.q(), kp.pq());
    let mut out = Vec::new();
    for b in 0..=(spec.max_degree / pq) {
        for h in 0..=1i64 {
            let base = pq * (b + h);
            if base > spec.max_degree {
                continue;
            }
            for pp in 0..=((spec.max_degree - base) / q) {
                let rest = spec.max_degree - base - q * pp;
                for qq in 0..=(rest / p) {
                    let current = ReebCurrent::new(b as u32, h as u32, pp as u32, qq as u32);
                    out.push(Generator {
                        name: current.to_string(),
                        degree: degree(&current, &kp),
                        index: table.ech_index(&current),
                        filtration: knot_filtration(&current, &kp),
                        current,
                    });
                }
            }
        }
    }
    out.sort_by(|a, b| a.index.cmp(&b.index).then_with(|| a.name.cmp(&b.name)));
    out
}

/// Symmetric difference of two sorted index lists.
fn xor_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Sparse Z/2 boundary matrix; column `j` lists the rows hit by `∂(gen_j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryMatrix {
    pub columns: Vec<Vec<usize>>,
    pub grading: Vec<i64>,
    /// Generators whose boundary leaves the degree window.
    pub incomplete: Vec<bool>,
}

impl BoundaryMatrix {
    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    /// `∂` applied to a chain given as a sorted list of generator positions.
    pub fn apply(&self, chain: &[usize]) -> Vec<usize> {
        chain
            .iter()
            .fold(Vec::new(), |acc, &j| xor_sorted(&acc, &self.columns[j]))
    }

    pub fn squares_to_zero(&self) -> bool {
        (0..self.len())
            .into_par_iter()
            .all(|j| self.apply(&self.columns[j]).is_empty())
    }
}

/// Generators together with their differential.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub spec: ComplexSpec,
    pub generators: Vec<Generator>,
    pub boundary: BoundaryMatrix,
    position: HashMap<ReebCurrent, usize>,
}

/// Builds the generators and the differential `∂(hγ) = p^p γ + q^q γ`.
pub fn differential(spec: &ComplexSpec) -> ChainComplex {
    let generators = enumerate(spec);
    let position: HashMap<ReebCurrent, usize> = generators
        .iter()
        .enumerate()
        .map(|(i, g)| (g.current, i))
        .collect();
    let kp = spec.kp;
    let (columns, incomplete): (Vec<Vec<usize>>, Vec<bool>) = generators
        .par_iter()
        .map(|g| {
            if g.current.h == 0 {
                return (Vec::new(), false);
            }
            let gamma = ReebCurrent { h: 0, ..g.current };
            let targets = [
                gamma.with(Orbit::P, kp.p() as u32),
                gamma.with(Orbit::Q, kp.q() as u32),
            ];
            let mut rows = Vec::with_capacity(2);
            let mut incomplete = false;
            for t in targets {
                match position.get(&t) {
                    Some(&r) => rows.push(r),
                    None => incomplete = true,
                }
            }
            rows.sort_unstable();
            (rows, incomplete)
        })
        .unzip();
    let grading = generators.iter().map(|g| g.index).collect();
    ChainComplex {
        spec: *spec,
        generators,
        boundary: BoundaryMatrix {
            columns,
            grading,
            incomplete,
        },
        position,
    }
}

/// Result of reducing a boundary matrix: `R = ∂·V` with `R` reduced.
#[derive(Clone, Debug)]
pub struct Reduction {
    reduced: Vec<Vec<usize>>,
    basis: Vec<Vec<usize>>,
    pivot_column: HashMap<usize, usize>,
}

impl Reduction {
    /// Standard left-to-right column reduction over Z/2.
    pub fn compute(matrix: &BoundaryMatrix, active: &[bool]) -> Reduction {
        let n = matrix.len();
        let mut reduced: Vec<Vec<usize>> = Vec::with_capacity(n);
        let mut basis: Vec<Vec<usize>> = Vec::with_capacity(n);
        let mut pivot_column: HashMap<usize, usize> = HashMap::new();
        for (j, (column, &on)) in matrix.columns.iter().zip(active).enumerate() {
            let mut col = if on { column.clone() } else { Vec::new() };
            let mut v = vec![j];
            while let Some(&low) = col.last() {
                match pivot_column.get(&low) {
                    Some(&k) => {
                        col = xor_sorted(&col, &reduced[k]);
                        v = xor_sorted(&v, &basis[k]);
                    }
                    None => break,
                }
            }
            if let Some(&low) = col.last() {
                pivot_column.insert(low, j);
            }
            reduced.push(col);
            basis.push(v);
        }
        Reduction {
            reduced,
            basis,
            pivot_column,
        }
    }

    pub fn is_pivot_row(&self, row: usize) -> bool {
        self.pivot_column.contains_key(&row)
    }

    pub fn is_cycle(&self, col: usize) -> bool {
        self.reduced[col].is_empty()
    }

    /// A chain `c` with `∂c = target`, if the target is a boundary.
    pub fn bounding_chain(&self, target: &[usize]) -> Option<Vec<usize>> {
        let mut rest = target.to_vec();
        let mut chain = Vec::new();
        while let Some(&low) = rest.last() {
            let &k = self.pivot_column.get(&low)?;
            rest = xor_sorted(&rest, &self.reduced[k]);
            chain = xor_sorted(&chain, &self.basis[k]);
        }
        Some(chain)
    }
}

impl ChainComplex {
    pub fn position(&self, c: &ReebCurrent) -> Option<usize> {
        self.position.get(c).copied()
    }

    pub fn boundary_of(&self, c: &ReebCurrent) -> Option<Vec<ReebCurrent>> {
        let j = self.position(c)?;
        Some(
            self.boundary.columns[j]
                .iter()
                .map(|&r| self.generators[r].current)
                .collect(),
        )
    }

    fn ranks(&self, active: &[bool], max_index: i64) -> BTreeMap<i64, usize> {
        let red = Reduction::compute(&self.boundary, active);
        let mut ranks: BTreeMap<i64, usize> = (0..=max_index).map(|i| (i, 0)).collect();
        for (j, g) in self.generators.iter().enumerate() {
            if !active[j] || g.index > max_index {
                continue;
            }
            if red.is_cycle(j) && !red.is_pivot_row(j) {
                *ranks.entry(g.index).or_default() += 1;
            }
        }
        ranks
    }

    /// Rank of `H_i` for `0 ≤ i ≤ max_index`.
    pub fn homology(&self, max_index: i64) -> Result<BTreeMap<i64, usize>> {
        self.spec.check_window(max_index)?;
        Ok(self.ranks(&vec![true; self.generators.len()], max_index))
    }

    /// Homology of the subcomplex of generators with knot filtration `≤ level`.
    pub fn knot_filtered_homology(
        &self,
        level: &InfRat,
        max_index: i64,
    ) -> Result<BTreeMap<i64, usize>> {
        self.spec.check_window(max_index)?;
        let active: Vec<bool> = self
            .generators
            .iter()
            .map(|g| &g.filtration <= level)
            .collect();
        Ok(self.ranks(&active, max_index))
    }

    pub fn reduction(&self) -> Reduction {
        Reduction::compute(&self.boundary, &vec![true; self.generators.len()])
    }

    /// A chain bounding `a + b`, when the two generators are homologous.
    pub fn homology_certificate(
        &self,
        red: &Reduction,
        a: &ReebCurrent,
        b: &ReebCurrent,
    ) -> Option<Vec<ReebCurrent>> {
        let (i, j) = (self.position(a)?, self.position(b)?);
        let mut target = vec![i.min(j), i.max(j)];
        target.dedup();
        if i == j {
            target.clear();
        }
        let chain = red.bounding_chain(&target)?;
        Some(
            chain
                .into_iter()
                .map(|k| self.generators[k].current)
                .collect(),
        )
    }
}

/// Homology ranks `H_0 … H_max_index` of the complex below the cutoff.
pub fn homology(spec: &ComplexSpec, max_index: i64) -> Result<BTreeMap<i64, usize>> {
    spec.check_window(max_index)?;
    differential(spec).homology(max_index)
}

/// Homology of the knot-filtered subcomplex at `level`.
pub fn knot_filtered_homology(
    spec: &ComplexSpec,
    level: &InfRat,
    max_index: i64,
) -> Result<BTreeMap<i64, usize>> {
    spec.check_window(max_index)?;
    differential(spec).knot_filtered_homology(level, max_index)
}

/// The cycle `b^B p^P q^Q` with `P < p` generating `H_index`.
pub fn homology_representative(spec: &ComplexSpec, index: i64) -> Result<ReebCurrent> {
    if index < 0 || index % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "index {index} is not a nonnegative even number"
        )));
    }
    spec.check_window(index)?;
    let kp = spec.kp;
    let (p, q, pq) = (kp.p(), kp.q(), kp.pq());
    let level = nk(&kp, (index / 2) as u64);
    let table = IndexTable::new(kp);
    for b in 0..=(level / pq) {
        for pp in 0..p {
            let rest = level - pq * b - q * pp;
            if rest < 0 || rest % p != 0 {
                continue;
            }
            let c = ReebCurrent::new(b as u32, 0, pp as u32, (rest / p) as u32);
            if table.ech_index(&c) == index {
                return Ok(c);
            }
        }
    }
    Err(Error::Inconsistency(format!(
        "no generator of index {index} at degree {level}"
    )))
}
