use num_rational::Ratio;
use spincouple_core::coupling::{cg_eigenbasis, QuantumNumbers};
use spincouple_core::entanglement::separability_report;
use spincouple_core::errata::{reference_errata, ListingVerdict};
use spincouple_core::reference::{find_listing, published_verdict, PublishedVerdict, ReferenceSet};
use spincouple_core::spin::{spin_spin_hamiltonian, CouplingStrength, SpinSpecies};
use spincouple_core::HalfInt;

const TOL: f64 = 1e-10;

fn h(doubled: i32) -> HalfInt {
    HalfInt::from_doubled(doubled)
}

fn verdict_of(set: ReferenceSet, id: &str) -> ListingVerdict {
    reference_errata(set, TOL)
        .unwrap()
        .entry(id)
        .unwrap()
        .verdict
}

#[test]
fn two_particle_listings_match_exactly() {
    for set in [ReferenceSet::TwoElectron, ReferenceSet::TwoPhoton] {
        let report = reference_errata(set, TOL).unwrap();
        assert!(report.missing.is_empty());
        for e in &report.entries {
            assert_eq!(e.verdict, ListingVerdict::ExactMatch, "{}", e.id);
        }
    }
}

#[test]
fn three_electron_listings() {
    let report = reference_errata(ReferenceSet::ThreeElectron, TOL).unwrap();
    for id in ["eq24", "eq26", "eq27", "eq28", "eq29", "eq30", "eq31"] {
        assert!(report.entry(id).unwrap().verdict.is_consistent(), "{id}");
    }
    let eq25 = report.entry("eq25").unwrap();
    assert_eq!(eq25.verdict, ListingVerdict::AmplitudeMismatch);
    assert_eq!(eq25.wrong_m_kets, vec![vec![h(-1), h(1), h(-1)]]);
    assert!(eq25.corrected.iter().any(|t| t.ms == [h(1), h(1), h(-1)]));
    assert!(report.missing.is_empty());
    assert_eq!(report.remarks.len(), 1);
}

#[test]
fn three_photon_listings() {
    let report = reference_errata(ReferenceSet::ThreePhoton, TOL).unwrap();
    assert_eq!(report.entries.len(), 26);
    assert_eq!(report.missing.len(), 1);
    let missing = &report.missing[0];
    assert_eq!(missing.numbers, QuantumNumbers::triple(h(2), h(4), h(4)));
    let basis = cg_eigenbasis(
        &[SpinSpecies::PHOTON; 3],
        ReferenceSet::ThreePhoton.scheme(),
    )
    .unwrap();
    let oracle = basis.iter().find(|b| b.numbers == missing.numbers).unwrap();
    let norm: f64 = missing.terms.iter().map(|t| t.amplitude.norm_sqr()).sum();
    assert!((norm - 1.0).abs() < 1e-12);
    assert_eq!(
        missing.terms.len(),
        oracle
            .vector
            .amplitudes()
            .iter()
            .filter(|a| a.norm() > 1e-14)
            .count()
    );
    assert!(missing.terms.iter().all(|t| t.exact.is_some()));
    let mismatched: Vec<&str> = report
        .entries
        .iter()
        .filter(|e| !e.verdict.is_consistent())
        .map(|e| e.id.as_str())
        .collect();
    assert_eq!(mismatched, ["eq67", "eq75", "eq76"]);

    let eq67 = report.entry("eq67").unwrap();
    assert_eq!(eq67.norm_squared_exact, Some((7, 10)));
    let corrected: Vec<f64> = eq67.corrected.iter().map(|t| t.amplitude.re).collect();
    let a = 3.0 / 60f64.sqrt();
    let b = 1.0 / 15f64.sqrt();
    let expected = [-a, b, -a, 2.0 * b, -a, b, -a];
    assert_eq!(corrected.len(), expected.len());
    let sign = corrected[0].signum() * expected[0].signum();
    for (c, e) in corrected.iter().zip(expected) {
        assert!((c - sign * e).abs() < 1e-12);
    }

    let eq75 = report.entry("eq75").unwrap();
    assert_eq!(eq75.wrong_m_kets, vec![vec![h(0), h(2), h(0)]]);
    assert!(eq75.corrected.iter().any(|t| t.ms == [h(0), h(-2), h(0)]));

    let eq76 = report.entry("eq76").unwrap();
    assert_eq!(eq76.corrected.len(), 6);
    for t in &eq76.corrected {
        assert!((t.amplitude.norm() - 1.0 / 6f64.sqrt()).abs() < 1e-12);
    }

    for id in [
        "eq61", "eq62", "eq63", "eq64", "eq65", "eq66", "eq68", "eq73", "eq74",
    ] {
        assert_eq!(
            verdict_of(ReferenceSet::ThreePhoton, id),
            ListingVerdict::GlobalPhaseMatch,
            "{id}"
        );
    }
}

#[test]
fn exact_norms_of_consistent_listings() {
    for set in ReferenceSet::ALL {
        let report = reference_errata(set, TOL).unwrap();
        for e in report.entries.iter().filter(|e| e.verdict.is_consistent()) {
            assert_eq!(e.norm_squared_exact, Some((1, 1)), "{}", e.id);
        }
    }
}

#[test]
fn classification_concordance() {
    for set in ReferenceSet::ALL {
        let report = reference_errata(set, TOL).unwrap();
        let system = set.system();
        for listing in set.listings().unwrap() {
            if !report.entry(&listing.id).unwrap().verdict.is_consistent() {
                continue;
            }
            let published = published_verdict(&listing.id);
            let r = separability_report(&listing.state(&system).unwrap())
                .unwrap()
                .with_published(published);
            match published.unwrap() {
                PublishedVerdict::Ambiguous => assert_eq!(r.label_agreement, None),
                _ => assert_eq!(r.label_agreement, Some(true), "{}", listing.id),
            }
        }
    }
}

#[test]
fn inconsistent_listings_still_classify_via_oracle() {
    let basis = cg_eigenbasis(
        &[SpinSpecies::PHOTON; 3],
        ReferenceSet::ThreePhoton.scheme(),
    )
    .unwrap();
    for id in ["eq67", "eq75", "eq76"] {
        let (_, listing) = find_listing(id).unwrap().unwrap();
        let state = &basis
            .iter()
            .find(|b| b.numbers == listing.numbers)
            .unwrap()
            .vector;
        let r = separability_report(state).unwrap();
        assert_eq!(
            r.entangled,
            published_verdict(id) == Some(PublishedVerdict::Entangled),
            "{id}"
        );
    }
}

#[test]
fn single_listing_examples() {
    let system = [SpinSpecies::PHOTON; 3];
    let report = |id: &str| {
        let (_, l) = find_listing(id).unwrap().unwrap();
        separability_report(&l.state(&system).unwrap()).unwrap()
    };
    assert!(!report("eq54").entangled);
    let eq79 = report("eq79");
    assert!(!eq79.genuinely_entangled);
    assert_eq!(eq79.pair(0, 1).unwrap().entangled, Some(true));

    let (_, eq14) = find_listing("eq14").unwrap().unwrap();
    assert!(
        separability_report(&eq14.state(&[SpinSpecies::ELECTRON; 2]).unwrap())
            .unwrap()
            .entangled
    );
}

#[test]
fn interaction_spectra() {
    let g = 0.73;
    let cases: [(&[SpinSpecies], &[f64]); 3] = [
        (&[SpinSpecies::ELECTRON; 2], &[g / 4.0, -3.0 * g / 4.0]),
        (&[SpinSpecies::PHOTON; 2], &[g, -g, -2.0 * g]),
        (
            &[SpinSpecies::ELECTRON; 3],
            &[3.0 * g / 4.0, -3.0 * g / 4.0],
        ),
    ];
    for (system, levels) in cases {
        let ham = spin_spin_hamiltonian(system, CouplingStrength::new(g).unwrap()).unwrap();
        for e in ham.eigh().unwrap().values {
            assert!(
                levels.iter().any(|l| (e - l).abs() < 1e-10),
                "{e} not in {levels:?}"
            );
        }
    }
}

#[test]
fn listing_norms_are_exact_rationals() {
    let (_, eq67) = find_listing("eq67").unwrap().unwrap();
    assert_eq!(eq67.norm_squared().unwrap(), Ratio::new(7, 10));
}
