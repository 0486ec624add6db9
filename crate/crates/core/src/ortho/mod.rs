//! Mutually orthogonal exponential families.
//!
//! A finite set `Λ` gives mutually orthogonal exponentials `e^{2πiλx}` in
//! `L²(μ)` exactly when every nonzero difference of two members is a zero of
//! `μ̂`. Such a `Λ` is called bi-zero here.

mod classify;
mod clique;
mod construct;
mod structure;

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::freq::Frequency;
use crate::measure::MoranMeasure;
use crate::zeros::is_zero_of;

pub use classify::{classify, DigitReport, Regime, RegimeClassification};
pub use construct::{construct_lambda0, construct_lambda_star, construct_lambda_star_with, StarOrder};
pub use structure::{
    check_equal_cardinality_property, check_exponent_congruence, scan_exponent_congruence,
    CardinalityViolation, CongruenceCheck, CongruenceScan,
};

use clique::Graph;

/// Outcome of [`is_bizero_family`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BizeroVerdict {
    Orthogonal,
    /// The first pair, in canonical order, whose difference is not a zero.
    Counterexample { first: Frequency, second: Frequency },
}

impl BizeroVerdict {
    pub fn is_orthogonal(&self) -> bool {
        matches!(self, BizeroVerdict::Orthogonal)
    }
}

/// A bi-zero family for a fixed measure. Only constructible through checks
/// that establish the bi-zero property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalFamily {
    measure: MoranMeasure,
    members: BTreeSet<Frequency>,
}

impl OrthogonalFamily {
    /// Verifies `members` and wraps them.
    pub fn try_new(measure: &MoranMeasure, members: Vec<Frequency>) -> Result<Self> {
        match is_bizero_family(measure, &members)? {
            BizeroVerdict::Orthogonal => Ok(Self {
                measure: measure.clone(),
                members: members.into_iter().collect(),
            }),
            BizeroVerdict::Counterexample { first, second } => Err(Error::ConstructionFailed(
                first.to_string(),
                second.to_string(),
            )),
        }
    }

    pub fn measure(&self) -> &MoranMeasure {
        &self.measure
    }

    /// Members in canonical order.
    pub fn members(&self) -> &BTreeSet<Frequency> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, f: &Frequency) -> bool {
        self.members.contains(f)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Frequency> {
        self.members.iter()
    }
}

impl fmt::Display for OrthogonalFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

fn check_tags(measure: &MoranMeasure, members: &[Frequency]) -> Result<()> {
    if members.iter().any(|f| f.ratio() != measure.ratio()) {
        return Err(Error::RatioMismatch);
    }
    Ok(())
}

/// Decides whether every nonzero difference of `members` is a zero of `μ̂`.
///
/// ```
/// use moran::{Frequency, MoranMeasure, ortho::{is_bizero_family, BizeroVerdict}};
///
/// let m = MoranMeasure::rational_constant(1, 2, 3).unwrap();
/// let fam: Vec<_> = ["0", "2/3", "4/3"].iter().map(|s| Frequency::parse(&m, s).unwrap()).collect();
/// assert_eq!(is_bizero_family(&m, &fam).unwrap(), BizeroVerdict::Orthogonal);
/// ```
pub fn is_bizero_family(measure: &MoranMeasure, members: &[Frequency]) -> Result<BizeroVerdict> {
    check_tags(measure, members)?;
    let mut sorted = BTreeSet::new();
    for f in members {
        if !sorted.insert(f.clone()) {
            return Err(Error::DuplicateMember(f.to_string()));
        }
    }
    let sorted: Vec<_> = sorted.into_iter().collect();
    for (i, a) in sorted.iter().enumerate() {
        for b in &sorted[i + 1..] {
            if !is_zero_of(measure, &b.subtract(a)?)? {
                return Ok(BizeroVerdict::Counterexample {
                    first: a.clone(),
                    second: b.clone(),
                });
            }
        }
    }
    Ok(BizeroVerdict::Orthogonal)
}

/// The orthogonality graph on a candidate set anchored at 0: vertices are
/// the distinct nonzero candidates that are themselves zeros (so each is
/// compatible with 0), in canonical order; edges join pairs whose difference
/// is a zero.
#[derive(Debug, Clone)]
pub struct OrthogonalityGraph {
    measure: MoranMeasure,
    vertices: Vec<Frequency>,
    graph: Graph,
}

impl OrthogonalityGraph {
    pub fn build(
        measure: &MoranMeasure,
        candidates: impl IntoIterator<Item = Frequency>,
    ) -> Result<Self> {
        let candidates: Vec<_> = candidates.into_iter().collect();
        check_tags(measure, &candidates)?;
        let distinct: BTreeSet<_> = candidates.into_iter().filter(|f| !f.is_zero()).collect();
        let flags = distinct
            .par_iter()
            .map(|f| is_zero_of(measure, f))
            .collect::<Result<Vec<_>>>()?;
        let vertices: Vec<_> = distinct
            .into_iter()
            .zip(flags)
            .filter_map(|(f, keep)| keep.then_some(f))
            .collect();
        let rows = (0..vertices.len())
            .into_par_iter()
            .map(|i| {
                let mut row = Vec::new();
                for j in i + 1..vertices.len() {
                    if is_zero_of(measure, &vertices[j].subtract(&vertices[i])?)? {
                        row.push(j);
                    }
                }
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut graph = Graph::new(vertices.len());
        for (i, row) in rows.into_iter().enumerate() {
            for j in row {
                graph.add_edge(i, j);
            }
        }
        Ok(Self {
            measure: measure.clone(),
            vertices,
            graph,
        })
    }

    pub fn vertices(&self) -> &[Frequency] {
        &self.vertices
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.graph.is_adjacent(u, v)
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// Largest bi-zero family containing 0, lexicographically least in
    /// canonical order among those of maximum size.
    pub fn max_family(&self) -> OrthogonalFamily {
        let mut members: BTreeSet<_> = self
            .graph
            .least_maximum_clique()
            .into_iter()
            .map(|v| self.vertices[v].clone())
            .collect();
        members.insert(Frequency::zero(self.measure.ratio()));
        OrthogonalFamily {
            measure: self.measure.clone(),
            members,
        }
    }
}

/// Maximum bi-zero subset of `candidates ∪ {0}` that contains 0.
///
/// Families may be translated freely, so anchoring at 0 loses nothing.
pub fn max_orthogonal_family(
    measure: &MoranMeasure,
    candidates: impl IntoIterator<Item = Frequency>,
) -> Result<OrthogonalFamily> {
    Ok(OrthogonalityGraph::build(measure, candidates)?.max_family())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;
    use crate::measure::{canonicalize_ratio, DigitSequence};
    use crate::zeros::{enumerate_zeros, zero_witnesses};
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn cantor3() -> MoranMeasure {
        MoranMeasure::rational_constant(1, 2, 3).unwrap()
    }

    fn sqrt23() -> MoranMeasure {
        MoranMeasure::new(
            canonicalize_ratio(BigInt::from(2), BigInt::from(3), 2).unwrap(),
            DigitSequence::new(vec![], vec![5, 7]).unwrap(),
        )
    }

    fn lits(m: &MoranMeasure, xs: &[&str]) -> Vec<Frequency> {
        xs.iter().map(|s| Frequency::parse(m, s).unwrap()).collect()
    }

    #[test]
    fn bizero_examples() {
        let m = cantor3();
        assert!(is_bizero_family(&m, &lits(&m, &["0", "2/3", "4/3"])).unwrap().is_orthogonal());
        assert_eq!(
            is_bizero_family(&m, &lits(&m, &["1/3", "0"])).unwrap(),
            BizeroVerdict::Counterexample {
                first: Frequency::zero(m.ratio()),
                second: lits(&m, &["1/3"])[0].clone(),
            }
        );
        assert!(is_bizero_family(&m, &lits(&m, &["0"])).unwrap().is_orthogonal());
        assert!(is_bizero_family(&m, &[]).unwrap().is_orthogonal());
    }

    #[test]
    fn duplicates_and_foreign_members_are_errors() {
        let m = cantor3();
        assert!(matches!(
            is_bizero_family(&m, &lits(&m, &["0", "2/3", "0"])),
            Err(Error::DuplicateMember(_))
        ));
        let other = sqrt23();
        let foreign = Frequency::zero(other.ratio());
        assert_eq!(
            is_bizero_family(&m, &[foreign]),
            Err(Error::RatioMismatch)
        );
    }

    #[test]
    fn empty_candidates_give_singleton() {
        let m = cantor3();
        let fam = max_orthogonal_family(&m, Vec::new()).unwrap();
        assert_eq!(fam.len(), 1);
        assert!(fam.contains(&Frequency::zero(m.ratio())));
    }

    #[test]
    fn cantor3_search_reaches_three() {
        let m = cantor3();
        let fam = max_orthogonal_family(&m, enumerate_zeros(&m, 6, 20).unwrap()).unwrap();
        assert_eq!(fam.len(), 3);
        let members: Vec<_> = fam.iter().cloned().collect();
        assert!(is_bizero_family(&m, &members).unwrap().is_orthogonal());
    }

    #[test]
    fn irrational_search_reaches_seven() {
        let m = sqrt23();
        let graph = OrthogonalityGraph::build(&m, enumerate_zeros(&m, 8, 30).unwrap()).unwrap();
        let fam = graph.max_family();
        assert_eq!(fam.len(), 7);
        let members: Vec<_> = fam.iter().cloned().collect();
        assert!(is_bizero_family(&m, &members).unwrap().is_orthogonal());
    }

    #[test]
    fn differences_stay_in_one_branch() {
        let m = sqrt23();
        let fam = max_orthogonal_family(&m, enumerate_zeros(&m, 6, 20).unwrap()).unwrap();
        let members: Vec<_> = fam.iter().collect();
        let mut residues = BTreeSet::new();
        for (i, a) in members.iter().enumerate() {
            for b in &members[i + 1..] {
                for w in zero_witnesses(&m, &b.subtract(a).unwrap()).unwrap() {
                    residues.insert(w.level % u64::from(m.ratio().r()));
                }
            }
        }
        assert_eq!(residues.len(), 1, "{residues:?}");
    }

    #[test]
    fn search_is_deterministic() {
        let m = cantor3();
        let zs = enumerate_zeros(&m, 4, 10).unwrap();
        let a = max_orthogonal_family(&m, zs.clone()).unwrap();
        let reversed: Vec<_> = zs.into_iter().rev().collect();
        let b = max_orthogonal_family(&m, reversed).unwrap();
        assert_eq!(a, b);
    }

    proptest! {
        #[test]
        fn translation_invariance(
            picks in prop::collection::btree_set(0usize..40, 1..5),
            shift_num in -50i64..50,
            shift_den in 1i64..20,
        ) {
            let m = cantor3();
            let pool: Vec<_> = enumerate_zeros(&m, 3, 8).unwrap().into_iter().collect();
            let fam: Vec<_> = picks.iter().map(|&i| pool[i % pool.len()].clone())
                .collect::<BTreeSet<_>>().into_iter().collect();
            let shift = Frequency::rational(m.ratio(), Rational::new(shift_num.into(), shift_den.into()));
            let moved: Vec<_> = fam.iter().map(|f| f.add(&shift).unwrap()).collect();
            prop_assert_eq!(
                is_bizero_family(&m, &fam).unwrap().is_orthogonal(),
                is_bizero_family(&m, &moved).unwrap().is_orthogonal()
            );
        }
    }
}
