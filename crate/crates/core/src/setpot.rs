//! Set potentials: sparse nonnegative mass assignments on subsets of a
//! frame, with non-normalized Dempster-style combination and transport.
//!
//! Combination transports both focal sets to the join frame and collects
//! the mass of each intersection, including the empty set; contradiction
//! only surfaces at normalization, where the empty-set mass is discarded
//! and the rest rescaled to a basic probability assignment.

use std::collections::BTreeMap;

use crate::approx::ABS_TOL;
use crate::error::{FcfError, Result};
use crate::frame::{join2, transport_set, ElemSet, Frame};
use crate::probpot::ProbPotential;

/// A frame label plus a sparse mass map over subsets of the frame. Masses
/// are strictly positive; absent subsets carry zero. The empty set may
/// carry mass.
#[derive(Clone, Debug)]
pub struct SetPotential {
    label: Frame,
    masses: BTreeMap<ElemSet, f64>,
}

impl SetPotential {
    /// Builds a set potential, folding duplicate subsets together and
    /// dropping zero masses. Negative masses are rejected.
    pub fn new(
        label: Frame,
        masses: impl IntoIterator<Item = (ElemSet, f64)>,
    ) -> Result<SetPotential> {
        let mut map: BTreeMap<ElemSet, f64> = BTreeMap::new();
        for (index, (set, mass)) in masses.into_iter().enumerate() {
            label.check_subset(&set)?;
            if mass < 0.0 {
                return Err(FcfError::NegativeValue { index, value: mass });
            }
            if mass > 0.0 {
                *map.entry(set).or_insert(0.0) += mass;
            }
        }
        Ok(SetPotential { label, masses: map })
    }

    /// The null potential: no mass anywhere.
    pub fn null(label: Frame) -> SetPotential {
        SetPotential {
            label,
            masses: BTreeMap::new(),
        }
    }

    /// The unit potential: mass one on the full frame.
    pub fn unit(label: Frame) -> SetPotential {
        let full = label.full_set();
        SetPotential {
            label,
            masses: BTreeMap::from([(full, 1.0)]),
        }
    }

    /// A deterministic potential: mass one on the given subset.
    pub fn deterministic(label: Frame, set: ElemSet) -> Result<SetPotential> {
        label.check_subset(&set)?;
        Ok(SetPotential {
            label,
            masses: BTreeMap::from([(set, 1.0)]),
        })
    }

    pub fn label(&self) -> &Frame {
        &self.label
    }

    pub fn mass(&self, set: &ElemSet) -> f64 {
        self.masses.get(set).copied().unwrap_or(0.0)
    }

    /// Focal sets with their masses, in canonical subset order.
    pub fn focal_sets(&self) -> impl Iterator<Item = (&ElemSet, f64)> {
        self.masses.iter().map(|(s, &m)| (s, m))
    }

    pub fn focal_count(&self) -> usize {
        self.masses.len()
    }

    pub fn is_null(&self) -> bool {
        self.masses.is_empty()
    }

    /// Total mass including the empty set.
    pub fn total_mass(&self) -> f64 {
        self.masses.values().sum()
    }

    /// Non-normalized combination on the join of the two labels.
    pub fn combine(&self, other: &SetPotential) -> Result<SetPotential> {
        let joined = join2(&self.label, &other.label)?;
        let gen_self = generator_map(&joined, &self.label);
        let gen_other = generator_map(&joined, &other.label);
        let mut masses: BTreeMap<ElemSet, f64> = BTreeMap::new();
        for (s1, m1) in self.focal_sets() {
            for (s2, m2) in other.focal_sets() {
                let intersection: ElemSet = (0..joined.len() as u32)
                    .filter(|&e| {
                        s1.contains(&gen_self[e as usize]) && s2.contains(&gen_other[e as usize])
                    })
                    .collect();
                *masses.entry(intersection).or_insert(0.0) += m1 * m2;
            }
        }
        masses.retain(|_, m| *m > 0.0);
        Ok(SetPotential {
            label: joined,
            masses,
        })
    }

    /// Transport to an arbitrary frame: each focal set maps to the set of
    /// compatible elements, masses of coinciding images add up.
    pub fn transport(&self, to: &Frame) -> Result<SetPotential> {
        let mut masses: BTreeMap<ElemSet, f64> = BTreeMap::new();
        for (set, mass) in self.focal_sets() {
            let image = transport_set(&self.label, set, to)?;
            *masses.entry(image).or_insert(0.0) += mass;
        }
        Ok(SetPotential {
            label: to.clone(),
            masses,
        })
    }

    /// Normalization: drop the empty-set mass and rescale the rest to one.
    /// Fails on potentials whose non-empty mass is zero.
    pub fn normalize(&self) -> Result<Bpa> {
        let k: f64 = self
            .focal_sets()
            .filter(|(s, _)| !s.is_empty())
            .map(|(_, m)| m)
            .sum();
        if k <= 0.0 {
            return Err(FcfError::Contradiction(
                "set potential has no mass outside the empty set".into(),
            ));
        }
        let masses: BTreeMap<ElemSet, f64> = self
            .focal_sets()
            .filter(|(s, _)| !s.is_empty())
            .map(|(s, m)| (s.clone(), m / k))
            .collect();
        Ok(Bpa(SetPotential {
            label: self.label.clone(),
            masses,
        }))
    }

    /// Degree of support of `set`: total mass of nonempty focal sets
    /// contained in it.
    pub fn support(&self, set: &ElemSet) -> Result<f64> {
        self.label.check_subset(set)?;
        Ok(self
            .focal_sets()
            .filter(|(t, _)| !t.is_empty() && t.is_subset(set))
            .map(|(_, m)| m)
            .sum())
    }

    /// Plausibility of `set`: total mass of focal sets meeting it.
    pub fn plausibility(&self, set: &ElemSet) -> Result<f64> {
        self.label.check_subset(set)?;
        Ok(self
            .focal_sets()
            .filter(|(t, _)| !t.is_disjoint(set))
            .map(|(_, m)| m)
            .sum())
    }

    /// The likelihood function: per element, the total mass of focal sets
    /// containing it.
    pub fn likelihood(&self) -> ProbPotential {
        let mut values = vec![0.0; self.label.len()];
        for (set, mass) in self.focal_sets() {
            for &e in set {
                values[e as usize] += mass;
            }
        }
        ProbPotential::new_unchecked(self.label.clone(), values)
    }

    /// Label equality plus masswise agreement at the crate tolerance.
    pub fn approx_eq(&self, other: &SetPotential) -> bool {
        use crate::approx::approx_eq;
        if self.label != other.label {
            return false;
        }
        let keys: std::collections::BTreeSet<&ElemSet> =
            self.masses.keys().chain(other.masses.keys()).collect();
        keys.into_iter()
            .all(|k| approx_eq(self.mass(k), other.mass(k)))
    }
}

/// For `part <= joined`, the unique generator of each join element.
fn generator_map(joined: &Frame, part: &Frame) -> Vec<u32> {
    (0..joined.len() as u32)
        .map(|e| part.element_of_atom(joined.block(e)[0]))
        .collect()
}

/// A normalized set potential: no empty-set mass, total mass one.
#[derive(Clone, Debug)]
pub struct Bpa(SetPotential);

impl Bpa {
    /// Validates normalization within an absolute tolerance of 1e-12.
    pub fn try_new(potential: SetPotential) -> Result<Bpa> {
        let empty = potential.mass(&ElemSet::new());
        let total = potential.total_mass();
        if empty != 0.0 || (total - 1.0).abs() > ABS_TOL {
            return Err(FcfError::Contradiction(format!(
                "not a bpa: empty-set mass {empty}, total mass {total}"
            )));
        }
        Ok(Bpa(potential))
    }

    pub(crate) fn new_unchecked(potential: SetPotential) -> Bpa {
        Bpa(potential)
    }

    pub fn as_set_potential(&self) -> &SetPotential {
        &self.0
    }

    pub fn into_set_potential(self) -> SetPotential {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::approx_eq;
    use crate::universe::Universe;

    fn e1() -> (Universe, Frame, Frame, Frame) {
        let u = Universe::new(["1", "2", "3", "4"]).unwrap();
        let a = Frame::new(&u, &[vec!["1", "2"], vec!["3", "4"]]).unwrap();
        let b = Frame::new(&u, &[vec!["1", "3"], vec!["2", "4"]]).unwrap();
        let top = Frame::discrete(&u);
        (u, a, b, top)
    }

    #[test]
    fn combine_transports_focal_sets_to_the_join() {
        let (_, a, b, top) = e1();
        let m1 = SetPotential::new(
            a.clone(),
            [(ElemSet::from([0]), 0.6), (ElemSet::from([0, 1]), 0.4)],
        )
        .unwrap();
        let m2 = SetPotential::new(b, [(ElemSet::from([0]), 1.0)]).unwrap();
        let combined = m1.combine(&m2).unwrap();
        assert_eq!(combined.label(), &top);
        assert_eq!(combined.focal_count(), 2);
        assert!(approx_eq(combined.mass(&ElemSet::from([0])), 0.6));
        assert!(approx_eq(combined.mass(&ElemSet::from([0, 2])), 0.4));
    }

    #[test]
    fn unit_laws() {
        let (_, a, b, top) = e1();
        let m = SetPotential::new(
            a.clone(),
            [(ElemSet::from([0]), 0.6), (ElemSet::from([0, 1]), 0.4)],
        )
        .unwrap();
        let same_frame_unit = SetPotential::unit(a.clone());
        assert!(m.combine(&same_frame_unit).unwrap().approx_eq(&m));
        let unit_join = SetPotential::unit(a)
            .combine(&SetPotential::unit(b))
            .unwrap();
        assert!(unit_join.approx_eq(&SetPotential::unit(top)));
    }

    #[test]
    fn null_absorbs() {
        let (_, a, b, _) = e1();
        let m = SetPotential::new(a, [(ElemSet::from([1]), 2.0)]).unwrap();
        let null = SetPotential::null(b);
        assert!(m.combine(&null).unwrap().is_null());
        assert!(null.transport(m.label()).unwrap().is_null());
    }

    #[test]
    fn transport_examples() {
        let (_, a, _, top) = e1();
        let m = SetPotential::new(
            top.clone(),
            [(ElemSet::from([0]), 0.5), (ElemSet::from([3]), 0.5)],
        )
        .unwrap();
        let to_a = m.transport(&a).unwrap();
        assert!(approx_eq(to_a.mass(&ElemSet::from([0])), 0.5));
        assert!(approx_eq(to_a.mass(&ElemSet::from([1])), 0.5));
        assert!(m.transport(&top).unwrap().approx_eq(&m));
        let unit_image = SetPotential::unit(top).transport(&a).unwrap();
        assert!(unit_image.approx_eq(&SetPotential::unit(a)));
    }

    #[test]
    fn normalize_rescales_and_detects_contradiction() {
        let (_, a, _, _) = e1();
        let m = SetPotential::new(
            a.clone(),
            [
                (ElemSet::from([0]), 0.3),
                (ElemSet::new(), 0.3),
                (ElemSet::from([1]), 0.6),
            ],
        )
        .unwrap();
        let bpa = m.normalize().unwrap();
        let norm = bpa.as_set_potential();
        assert!(approx_eq(norm.mass(&ElemSet::from([0])), 1.0 / 3.0));
        assert!(approx_eq(norm.mass(&ElemSet::from([1])), 2.0 / 3.0));
        assert_eq!(norm.mass(&ElemSet::new()), 0.0);
        assert!(norm.normalize().unwrap().as_set_potential().approx_eq(norm));

        let contradictory = SetPotential::new(a, [(ElemSet::new(), 1.0)]).unwrap();
        assert!(matches!(
            contradictory.normalize(),
            Err(FcfError::Contradiction(_))
        ));
    }

    #[test]
    fn support_plausibility_and_likelihood() {
        let (_, a, _, _) = e1();
        let m = SetPotential::new(
            a.clone(),
            [(ElemSet::from([0]), 0.6), (ElemSet::from([0, 1]), 0.4)],
        )
        .unwrap();
        assert!(approx_eq(m.support(&ElemSet::from([0])).unwrap(), 0.6));
        assert!(approx_eq(m.plausibility(&ElemSet::from([0])).unwrap(), 1.0));
        assert!(approx_eq(m.support(&a.full_set()).unwrap(), 1.0));
        assert_eq!(m.plausibility(&ElemSet::new()).unwrap(), 0.0);
        let pl = m.likelihood();
        assert!(approx_eq(pl.value(0), 1.0));
        assert!(approx_eq(pl.value(1), 0.4));
        assert!(SetPotential::null(a).likelihood().is_null());
    }

    #[test]
    fn bpa_validation() {
        let (_, a, _, _) = e1();
        let ok = SetPotential::new(a.clone(), [(ElemSet::from([0]), 1.0)]).unwrap();
        assert!(Bpa::try_new(ok).is_ok());
        let bad = SetPotential::new(a, [(ElemSet::from([0]), 0.5)]).unwrap();
        assert!(Bpa::try_new(bad).is_err());
    }
}
