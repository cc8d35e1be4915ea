use mgf_core::identities::{lookup, registry, run_identity, supplementary, Status, Verdict, MANIFEST};
use mgf_core::MgfError;

#[test]
fn registry_covers_manifest() {
    let ids: Vec<&str> = registry().iter().map(|e| e.id).collect();
    assert_eq!(ids, MANIFEST);
    for e in registry().iter().chain(supplementary()) {
        assert!(e.tol >= 0.0 && e.max_dim >= 1, "{}", e.id);
        if e.status == Status::Suspect {
            assert!(e.forms.len() >= 2, "{} has no variant", e.id);
        }
    }
}

#[test]
fn decomposition_passes_at_dim_three() {
    let r = run_identity("EQ-2.3", 42, 100, 3, None).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    assert!(r.max_residual < 1e-10);
    assert_eq!(r.trials, 100);
}

#[test]
fn scalar_reduction_single_trial() {
    let r = run_identity("EQ-3.3", 5, 1, 1, None).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
}

#[test]
fn printed_gamma_integral_needs_correction() {
    let r = run_identity("EQ-2.28", 42, 20, 2, None).unwrap();
    assert_eq!(r.verdict, Verdict::SuspectResolved);
    assert_eq!(r.variant.as_deref(), Some("corrected"));
    assert!(r.note.unwrap().contains("as-printed"));
}

#[test]
fn unknown_identity() {
    assert!(matches!(lookup("EQ-0.0"), Err(MgfError::UnknownIdentity(_))));
}

#[test]
fn same_seed_same_report() {
    let a = run_identity("EQ-3.8", 9, 10, 2, None).unwrap().to_json_line();
    let b = run_identity("EQ-3.8", 9, 10, 2, None).unwrap().to_json_line();
    assert_eq!(a, b);
}
