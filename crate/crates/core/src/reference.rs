//! Published coupled-state listings bundled with the crate, and the
//! entangled / not-entangled verdict published for each.
//!
//! The listing files are transcribed term by term, errors included; the
//! [`errata`](crate::errata) module is what judges them.

use alloc::vec::Vec;

use crate::coupling::Scheme;
use crate::listing::{parse_listings, Listing};
use crate::spin::SpinSpecies;
use crate::Result;

/// One bundled listing file.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReferenceSet {
    TwoElectron,
    ThreeElectron,
    TwoPhoton,
    ThreePhoton,
}

/// How a published state is labeled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PublishedVerdict {
    Entangled,
    NotEntangled,
    /// Not labeled either way, and not a bare product state.
    Ambiguous,
}

/// A note attached to a listing set that concerns the surrounding equations
/// rather than one listed state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Remark {
    pub id: &'static str,
    pub text: &'static str,
}

const THREE_ELECTRON_REMARKS: &[Remark] = &[Remark {
    id: "eq21",
    text: "the eigenequation is written with the pair operator S12^2, but the eigenvalues \
           S(S+1) and the energy (g/2)(S^2 - 9/4) require the total three-particle S^2; \
           the basis here diagonalizes S^2 and uses S12^2 only to label S'",
}];

impl ReferenceSet {
    pub const ALL: [ReferenceSet; 4] = [
        ReferenceSet::TwoElectron,
        ReferenceSet::ThreeElectron,
        ReferenceSet::TwoPhoton,
        ReferenceSet::ThreePhoton,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ReferenceSet::TwoElectron => "two-electron",
            ReferenceSet::ThreeElectron => "three-electron",
            ReferenceSet::TwoPhoton => "two-photon",
            ReferenceSet::ThreePhoton => "three-photon",
        }
    }

    pub fn system(self) -> Vec<SpinSpecies> {
        let (species, n) = match self {
            ReferenceSet::TwoElectron => (SpinSpecies::ELECTRON, 2),
            ReferenceSet::ThreeElectron => (SpinSpecies::ELECTRON, 3),
            ReferenceSet::TwoPhoton => (SpinSpecies::PHOTON, 2),
            ReferenceSet::ThreePhoton => (SpinSpecies::PHOTON, 3),
        };
        alloc::vec![species; n]
    }

    pub fn scheme(self) -> Scheme {
        match self {
            ReferenceSet::TwoElectron | ReferenceSet::TwoPhoton => Scheme::PairOnly,
            ReferenceSet::ThreeElectron | ReferenceSet::ThreePhoton => Scheme::PairThenThird,
        }
    }

    /// The raw listing file.
    pub fn source(self) -> &'static str {
        match self {
            ReferenceSet::TwoElectron => include_str!("../listings/two_electron.txt"),
            ReferenceSet::ThreeElectron => include_str!("../listings/three_electron.txt"),
            ReferenceSet::TwoPhoton => include_str!("../listings/two_photon.txt"),
            ReferenceSet::ThreePhoton => include_str!("../listings/three_photon.txt"),
        }
    }

    pub fn listings(self) -> Result<Vec<Listing>> {
        parse_listings(self.source())
    }

    pub fn remarks(self) -> &'static [Remark] {
        match self {
            ReferenceSet::ThreeElectron => THREE_ELECTRON_REMARKS,
            _ => &[],
        }
    }

    /// The set whose system equals `system`, if any.
    pub fn for_system(system: &[SpinSpecies]) -> Option<ReferenceSet> {
        ReferenceSet::ALL.into_iter().find(|s| s.system() == system)
    }
}

/// The published verdict for a listing id; `None` for unknown ids.
///
/// Three-electron states are labeled only collectively: four are named as
/// entangled. The two fully aligned products count as not entangled; the
/// remaining two (`eq30`, `eq31`) are [`PublishedVerdict::Ambiguous`].
pub fn published_verdict(id: &str) -> Option<PublishedVerdict> {
    use PublishedVerdict::*;
    let v = match id {
        "eq12" | "eq13" => NotEntangled,
        "eq14" | "eq15" => Entangled,
        "eq24" | "eq27" => NotEntangled,
        "eq25" | "eq26" | "eq28" | "eq29" => Entangled,
        "eq30" | "eq31" => Ambiguous,
        "eq37" | "eq41" => NotEntangled,
        "eq38" | "eq39" | "eq40" | "eq42" | "eq43" | "eq44" | "eq45" => Entangled,
        "eq54" | "eq60" | "eq72" | "eq77" | "eq78" | "eq79" => NotEntangled,
        _ => {
            let n: u32 = id.strip_prefix("eq")?.parse().ok()?;
            if (54..=79).contains(&n) {
                Entangled
            } else {
                return None;
            }
        }
    };
    Some(v)
}

/// Looks a listing up by id across all bundled sets.
pub fn find_listing(id: &str) -> Result<Option<(ReferenceSet, Listing)>> {
    for set in ReferenceSet::ALL {
        if let Some(l) = set.listings()?.into_iter().find(|l| l.id == id) {
            return Ok(Some((set, l)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::HalfInt;

    #[test]
    fn bundled_files_parse() {
        let counts: Vec<usize> = ReferenceSet::ALL
            .iter()
            .map(|s| s.listings().unwrap().len())
            .collect();
        assert_eq!(counts, alloc::vec![4, 8, 9, 26]);
        for set in ReferenceSet::ALL {
            for l in set.listings().unwrap() {
                assert_eq!(l.particles(), set.system().len(), "{}", l.id);
                assert!(published_verdict(&l.id).is_some(), "{}", l.id);
            }
        }
    }

    #[test]
    fn verdict_tallies() {
        let tally = |set: ReferenceSet| {
            let ls = set.listings().unwrap();
            let count = |v| {
                ls.iter()
                    .filter(|l| published_verdict(&l.id) == Some(v))
                    .count()
            };
            (
                count(PublishedVerdict::Entangled),
                count(PublishedVerdict::NotEntangled),
            )
        };
        assert_eq!(tally(ReferenceSet::TwoElectron), (2, 2));
        assert_eq!(tally(ReferenceSet::TwoPhoton), (7, 2));
        assert_eq!(tally(ReferenceSet::ThreePhoton), (20, 6));
        assert_eq!(published_verdict("eq30"), Some(PublishedVerdict::Ambiguous));
        assert_eq!(published_verdict("eq99"), None);
        assert_eq!(published_verdict("x"), None);
    }

    #[test]
    fn lookup() {
        let (set, l) = find_listing("eq39").unwrap().unwrap();
        assert_eq!(set, ReferenceSet::TwoPhoton);
        assert_eq!(l.numbers.s_total, HalfInt::from_int(2));
        assert_eq!(
            ReferenceSet::for_system(&[SpinSpecies::ELECTRON; 3]),
            Some(ReferenceSet::ThreeElectron)
        );
        assert_eq!(
            ReferenceSet::for_system(&[SpinSpecies::ELECTRON, SpinSpecies::PHOTON]),
            None
        );
        assert!(find_listing("eq1").unwrap().is_none());
    }
}
