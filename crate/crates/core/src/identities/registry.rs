use super::checks_gamma as g;
use super::checks_incexp as e;
use super::{Checker, Form, FormRole, IdentityEntry, IndependentSide, Status};

use IndependentSide::*;

/// Every equation the suite must cover, in the order reports are emitted.
pub const MANIFEST: [&str; 92] = [
    "EQ-1.4", "EQ-1.5", "EQ-1.17",
    "EQ-2.3", "EQ-2.4", "EQ-2.5", "EQ-2.6", "EQ-2.7", "EQ-2.8", "EQ-2.9", "EQ-2.10", "EQ-2.11",
    "EQ-2.12", "EQ-2.13", "EQ-2.14", "EQ-2.15", "EQ-2.16", "EQ-2.17", "EQ-2.18", "EQ-2.19",
    "EQ-2.20", "EQ-2.21", "EQ-2.22", "EQ-2.23", "EQ-2.24", "EQ-2.25", "EQ-2.26", "EQ-2.27",
    "EQ-2.28", "EQ-2.29", "EQ-2.30", "EQ-2.31", "EQ-2.32", "EQ-2.33", "EQ-2.35", "EQ-2.36",
    "EQ-2.37", "EQ-2.38", "EQ-2.39", "EQ-2.40", "EQ-2.41", "EQ-2.42", "EQ-2.43", "EQ-2.44",
    "EQ-2.45",
    "EQ-3.3", "EQ-3.8", "EQ-3.9", "EQ-3.10", "EQ-3.11", "EQ-3.12", "EQ-3.13", "EQ-3.14",
    "EQ-3.15", "EQ-3.16", "EQ-3.17", "EQ-3.18", "EQ-3.19", "EQ-3.20", "EQ-4.12", "EQ-3.22",
    "EQ-3.23", "EQ-3.24", "EQ-3.25", "EQ-3.26", "EQ-3.27", "EQ-3.29", "EQ-3.30", "EQ-3.31",
    "EQ-3.32", "EQ-3.34", "EQ-3.35", "EQ-4.25", "EQ-3.37", "EQ-3.38", "EQ-3.39", "EQ-3.40",
    "EQ-3.41", "EQ-3.42", "EQ-3.43", "EQ-3.44", "EQ-3.45", "EQ-3.46", "EQ-3.47", "EQ-3.48",
    "EQ-3.49", "EQ-3.50", "EQ-3.51", "EQ-3.52", "EQ-3.53", "EQ-3.54", "EQ-3.55",
];

const fn printed(name: &'static str) -> Form {
    Form { name, role: FormRole::Printed }
}

const fn variant(name: &'static str) -> Form {
    Form { name, role: FormRole::Variant }
}

const AS_PRINTED: &[Form] = &[printed("as-printed")];
const CORRECTED: &[Form] = &[printed("as-printed"), variant("corrected")];

const fn entry(
    id: &'static str,
    description: &'static str,
    independent: IndependentSide,
    tol: f64,
    checker: Checker,
) -> IdentityEntry {
    IdentityEntry {
        id,
        description,
        status: Status::ExpectedPass,
        independent,
        forms: AS_PRINTED,
        tol,
        max_dim: 4,
        trial_cap: None,
        commuting: false,
        checker,
    }
}

impl IdentityEntry {
    const fn suspect(mut self, forms: &'static [Form]) -> Self {
        self.status = Status::Suspect;
        self.forms = forms;
        self
    }

    const fn commuting(mut self) -> Self {
        self.commuting = true;
        self
    }

    const fn small(mut self, max_dim: usize, cap: usize) -> Self {
        self.max_dim = max_dim;
        self.trial_cap = Some(cap);
        self
    }
}

const FD: f64 = 1e-5;
const ODE: f64 = 1e-4;
const QUAD: f64 = 1e-6;
const REC: f64 = 1e-9;
const TIGHT: f64 = 1e-10;
const EXACT: f64 = 1e-11;
const SUM: f64 = 1e-7;

static REGISTRY: [IdentityEntry; 92] = [
    entry("EQ-1.4", "rectangular reindexing of a double sum", AlternateSeries, 0.0, g::eq_1_4),
    entry("EQ-1.5", "triangular reindexing of a double sum", AlternateSeries, 0.0, g::eq_1_5),
    entry("EQ-1.17", "rRs with P = I reduces to pFq with one extra lower parameter I", AlternateSeries, TIGHT, g::eq_1_17).commuting(),
    entry("EQ-2.3", "γ(Q,x) + Γ(Q,x) = Γ(Q)", AlternateSeries, TIGHT, g::eq_2_3),
    entry("EQ-2.4", "first-order recurrence of γ in Q", ClosedForm, TIGHT, g::eq_2_4),
    entry("EQ-2.5", "first-order recurrence of Γ in Q", ClosedForm, TIGHT, g::eq_2_5),
    entry("EQ-2.6", "three-term recurrence of γ in Q", ClosedForm, REC, g::eq_2_6),
    entry("EQ-2.7", "three-term recurrence of Γ in Q", ClosedForm, REC, g::eq_2_7),
    entry("EQ-2.8", "lower incomplete Pochhammer symbol as an integral", Quadrature, QUAD, g::eq_2_8).small(2, 6),
    entry("EQ-2.9", "upper incomplete Pochhammer symbol as an integral", Quadrature, QUAD, g::eq_2_9).small(2, 6),
    entry("EQ-2.10", "lower plus upper incomplete Pochhammer symbols give (Q)_n", AlternateSeries, TIGHT, g::eq_2_10),
    entry("EQ-2.11", "(Q)_{kn} as a product of shifted Pochhammer symbols", AlternateSeries, EXACT, g::eq_2_11),
    entry("EQ-2.12", "γ(Q,x) through Kummer's function", AlternateSeries, REC, g::eq_2_12).suspect(CORRECTED),
    entry("EQ-2.13", "Γ(Q,x) through Tricomi's function", AlternateSeries, REC, g::eq_2_13)
        .suspect(&[printed("as-printed"), variant("laplace-tricomi")]),
    entry("EQ-2.14", "x-derivative of γ(Q,x)", FiniteDifference, FD, g::eq_2_14),
    entry("EQ-2.15", "x-derivative of Γ(Q,x)", FiniteDifference, FD, g::eq_2_15),
    entry("EQ-2.16", "Leibniz rule for a parameter-dependent integral", FiniteDifference, FD, g::eq_2_16).small(2, 6),
    entry("EQ-2.17", "second-order ODE satisfied by γ(Q,x)", FiniteDifference, ODE, g::eq_2_17),
    entry("EQ-2.18", "second-order ODE satisfied by Γ(Q,x)", FiniteDifference, ODE, g::eq_2_18),
    entry("EQ-2.19", "n-th derivative of x^{−Q}Γ(Q,x)", FiniteDifference, FD, g::eq_2_19),
    entry("EQ-2.20", "n-th derivative of x^{−Q}γ(Q,x)", FiniteDifference, FD, g::eq_2_20),
    entry("EQ-2.21", "n-th derivative of e^x Γ(Q,x)", FiniteDifference, FD, g::eq_2_21),
    entry("EQ-2.22", "n-th derivative of e^x γ(Q,x)", FiniteDifference, FD, g::eq_2_22),
    entry("EQ-2.23", "Γ(Q,x) as an integral over the half line", Quadrature, QUAD, g::eq_2_23).small(2, 6),
    entry("EQ-2.24", "γ(Q,x) as an integral over [0,1]", Quadrature, QUAD, g::eq_2_24).small(2, 6),
    entry("EQ-2.25", "indefinite integral of x^{A−I}Γ(Q,x)", Quadrature, QUAD, g::eq_2_25).commuting().small(2, 6),
    entry("EQ-2.26", "indefinite integral of x^{A−I}γ(Q,x)", Quadrature, QUAD, g::eq_2_26).commuting().small(2, 6),
    entry("EQ-2.27", "integral of e^{−tx}Γ(Q,x) over the half line", Quadrature, QUAD, g::eq_2_27).small(2, 6),
    entry("EQ-2.28", "Laplace transform of γ(Q,x)", Quadrature, QUAD, g::eq_2_28).commuting().suspect(CORRECTED).small(2, 6),
    entry("EQ-2.29", "Laplace transform of Γ(Q,x)", Quadrature, QUAD, g::eq_2_29).commuting().small(2, 6),
    entry("EQ-2.30", "Mellin transform of γ(Q,x)", Quadrature, QUAD, g::eq_2_30).commuting().small(2, 6),
    entry("EQ-2.31", "Mellin transform of Γ(Q,x)", Quadrature, QUAD, g::eq_2_31).commuting().small(2, 6),
    entry("EQ-2.32", "γ(Q−nI,x) as a finite sum", ClosedForm, REC, g::eq_2_32),
    entry("EQ-2.33", "Γ(Q+nI,x) as a finite sum", ClosedForm, REC, g::eq_2_33),
    entry("EQ-2.35", "γ*(Q,x) through Kummer's function", AlternateSeries, REC, g::eq_2_35).suspect(CORRECTED),
    entry("EQ-2.36", "γ*(Q,x) as an integral over [0,1]", Quadrature, QUAD, g::eq_2_36).small(2, 6),
    entry("EQ-2.37", "recurrence of γ*(Q,x) in Q", ClosedForm, REC, g::eq_2_37),
    entry("EQ-2.38", "x^Q γ*(Q,x) tends to I as x grows", ClosedForm, 1e-6, g::eq_2_38),
    entry("EQ-2.39", "γ*(Q,x) from γ(Q,x)", ClosedForm, TIGHT, g::eq_2_39),
    entry("EQ-2.40", "alternating series of γ*(Q,x)", AlternateSeries, TIGHT, g::eq_2_40),
    entry("EQ-2.41", "positive series of γ(Q,x)", AlternateSeries, TIGHT, g::eq_2_41),
    entry("EQ-2.42", "alternating series of γ(Q,x)", AlternateSeries, TIGHT, g::eq_2_42),
    entry("EQ-2.43", "n-th derivative of e^x x^Q γ*(Q,x)", FiniteDifference, FD, g::eq_2_43),
    entry("EQ-2.44", "second-order ODE satisfied by γ*(Q,x)", FiniteDifference, ODE, g::eq_2_44),
    entry("EQ-2.45", "second-order ODE satisfied by e^x γ*(Q,x)", FiniteDifference, ODE, g::eq_2_45),
    entry("EQ-3.3", "e(x,Q;u) + E(x,Q;u) = e^u I", AlternateSeries, TIGHT, e::eq_3_3),
    entry("EQ-3.8", "rest + rEs = rFs", AlternateSeries, TIGHT, e::eq_3_8),
    entry("EQ-3.9", "0e0 with P = I is e(x,Q;z)", AlternateSeries, TIGHT, e::eq_3_9),
    entry("EQ-3.10", "0E0 with P = I is E(x,Q;z)", AlternateSeries, TIGHT, e::eq_3_10),
    entry("EQ-3.11", "shifting one parameter by n as a weighted sum of series terms", AlternateSeries, REC, e::eq_3_11).commuting(),
    entry("EQ-3.12", "raising A1 by one as a weighted sum of series terms", AlternateSeries, REC, e::eq_3_12).commuting(),
    entry("EQ-3.13", "unit shifts of A_i and B_j as weighted sums of series terms", AlternateSeries, REC, e::eq_3_13).commuting(),
    entry("EQ-3.14", "contiguous relation between two upper parameters", AlternateSeries, REC, e::eq_3_14).commuting(),
    entry("EQ-3.15", "contiguous relation between two lower parameters", AlternateSeries, REC, e::eq_3_15).commuting(),
    entry("EQ-3.16", "contiguous relation between an upper and a lower parameter", AlternateSeries, REC, e::eq_3_16).commuting(),
    entry("EQ-3.17", "(θ + A_i) e = A_i e(A_i + I)", ContourIntegral, REC, e::eq_3_17).commuting().small(4, 50),
    entry("EQ-3.18", "(θ + B_j − I) e = (B_j − I) e(B_j − I)", ContourIntegral, REC, e::eq_3_18).commuting().small(4, 50),
    entry("EQ-3.19", "n-th z-derivative of e", FiniteDifference, FD, e::eq_3_19).commuting(),
    entry("EQ-3.20", "first z-derivative of e", ContourIntegral, REC, e::eq_3_20).commuting().small(4, 50),
    entry("EQ-4.12", "differential recurrence raising Q by I", ContourIntegral, 1e-8, e::eq_4_12)
        .commuting()
        .small(4, 50)
        .suspect(&[printed("as-printed"), variant("minus-exp-minus-x"), variant("plus-exp-minus-x"), variant("minus-exp-plus-x")]),
    entry("EQ-3.22", "E as an integral from x to infinity", Quadrature, QUAD, e::eq_3_22)
        .commuting()
        .suspect(&[printed("as-printed"), variant("reversed-orientation")])
        .small(2, 4),
    entry("EQ-3.23", "e as an integral with one end at x", Quadrature, QUAD, e::eq_3_23)
        .commuting()
        .suspect(&[printed("as-printed"), variant("from-x-to-infinity"), variant("from-zero-to-x")])
        .small(2, 4),
    entry("EQ-3.24", "Euler integral of e over A1, B1", Quadrature, QUAD, e::eq_3_24)
        .commuting()
        .suspect(&[printed("as-printed"), variant("re-b1-above-re-a1")])
        .small(2, 4),
    entry("EQ-3.25", "Euler integral of E over A1, B1", Quadrature, QUAD, e::eq_3_25)
        .commuting()
        .suspect(&[printed("as-printed"), variant("re-b1-above-re-a1")])
        .small(2, 4),
    entry("EQ-3.26", "(A)_ℓ[(B)_ℓ]⁻¹ as a Beta integral", Quadrature, QUAD, e::eq_3_26).commuting().small(2, 6),
    entry("EQ-3.27", "n-th z-derivatives of e and E", ContourIntegral, REC, e::eq_3_27).commuting().small(4, 20),
    entry("EQ-3.29", "first z-derivative of E", FiniteDifference, FD, e::eq_3_29).commuting(),
    entry("EQ-3.30", "first z-derivative of e", FiniteDifference, FD, e::eq_3_30).commuting(),
    entry("EQ-3.31", "x-derivative of e", FiniteDifference, FD, e::eq_3_31).commuting(),
    entry("EQ-3.32", "x-derivative of E", FiniteDifference, FD, e::eq_3_32).commuting(),
    entry("EQ-3.34", "addition theorem for E", AlternateSeries, 1e-8, e::eq_3_34).commuting().small(4, 10),
    entry("EQ-3.35", "multiplication theorem for E", AlternateSeries, 1e-8, e::eq_3_35).commuting().small(4, 10),
    entry("EQ-4.25", "Beta-type integral of E against u^{P−I}(t−u)^{Q−I}", Quadrature, QUAD, e::eq_4_25).commuting().small(2, 4),
    entry("EQ-3.37", "fractional integral of E over [t,x]", Quadrature, QUAD, e::eq_3_37).commuting().small(2, 4),
    entry("EQ-3.38", "Euler integral of e over A_i, B_j", Quadrature, QUAD, e::eq_3_38).commuting().small(2, 4),
    entry("EQ-3.39", "Euler integral of E over A_i, B_j", Quadrature, QUAD, e::eq_3_39).commuting().small(2, 4),
    entry("EQ-3.40", "Laplace-type integral of e removing A1", Quadrature, QUAD, e::eq_3_40).commuting().small(2, 4),
    entry("EQ-3.41", "Laplace-type integral of E removing A1", Quadrature, QUAD, e::eq_3_41).commuting().small(2, 4),
    entry("EQ-3.42", "contiguous relation of 1e1 between A1 and B1", AlternateSeries, REC, e::eq_3_42).commuting(),
    entry("EQ-3.43", "contiguous relation of 1E1 between A1 and B1", AlternateSeries, REC, e::eq_3_43).commuting(),
    entry("EQ-3.44", "contiguous relation of 2e1 as an explicit series", AlternateSeries, REC, e::eq_3_44).commuting(),
    entry("EQ-3.45", "(C + (1−k)I)_n as a Pochhammer quotient", ClosedForm, EXACT, e::eq_3_45).suspect(CORRECTED),
    entry("EQ-3.46", "binomial summation of e over its lower parameter", AlternateSeries, SUM, e::eq_3_46)
        .commuting()
        .suspect(CORRECTED)
        .small(4, 6),
    entry("EQ-3.47", "binomial summation of E over its lower parameter", AlternateSeries, SUM, e::eq_3_47)
        .commuting()
        .suspect(CORRECTED)
        .small(4, 6),
    entry("EQ-3.48", "double-sum form of the binomial summation of e", AlternateSeries, SUM, e::eq_3_48)
        .commuting()
        .suspect(CORRECTED)
        .small(4, 4),
    entry("EQ-3.49", "binomial series Σ(−C)_k t^k/k! = (1−t)^C", ClosedForm, EXACT, e::eq_3_49).suspect(CORRECTED),
    entry("EQ-3.50", "binomial summation of pFq over its lower parameter", AlternateSeries, SUM, e::eq_3_50)
        .commuting()
        .suspect(CORRECTED)
        .small(4, 6),
    entry("EQ-3.51", "Ψ_p sequence as an explicit series", AlternateSeries, TIGHT, e::eq_3_51).commuting(),
    entry("EQ-3.52", "Φ_p sequence as an explicit series", AlternateSeries, TIGHT, e::eq_3_52).commuting(),
    entry("EQ-3.53", "generating relation of the Ψ_p sequence", AlternateSeries, SUM, e::eq_3_53)
        .commuting()
        .suspect(CORRECTED)
        .small(4, 6),
    entry("EQ-3.54", "generating relation of the Φ_p sequence", AlternateSeries, SUM, e::eq_3_54)
        .commuting()
        .suspect(CORRECTED)
        .small(4, 6),
    entry("EQ-3.55", "Pochhammer identity behind the generating relation", ClosedForm, EXACT, e::eq_3_55).suspect(CORRECTED),
];

static SUPPLEMENTARY: [IdentityEntry; 4] = [
    entry("EQ-2.1", "γ(Q,x) as an integral over [0,x]", Quadrature, QUAD, g::eq_2_1).small(2, 6),
    entry("EQ-2.2", "Γ(Q,x) as an integral over [x,∞)", Quadrature, QUAD, g::eq_2_2).small(2, 6),
    entry("EQ-3.4", "e(x,Q;u) as an integral over [0,x]", Quadrature, QUAD, e::eq_3_4).small(2, 4),
    entry("EQ-3.5", "E(x,Q;u) as an integral over [x,∞)", Quadrature, QUAD, e::eq_3_5).small(2, 4),
];

/// The audited entries, one per manifest id and in manifest order.
pub fn registry() -> &'static [IdentityEntry] {
    &REGISTRY
}

/// Definitions backing the integral suite that are not part of the manifest.
pub fn supplementary() -> &'static [IdentityEntry] {
    &SUPPLEMENTARY
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn registry_matches_manifest() {
        let ids: Vec<&str> = registry().iter().map(|e| e.id).collect();
        assert_eq!(ids, MANIFEST.to_vec());
        let unique: HashSet<&str> = ids.iter().copied().chain(supplementary().iter().map(|e| e.id)).collect();
        assert_eq!(unique.len(), MANIFEST.len() + supplementary().len());
    }

    #[test]
    fn suspects_carry_a_variant() {
        for e in registry() {
            let variants = e.forms.iter().filter(|f| f.role == FormRole::Variant).count();
            let printed = e.forms.iter().filter(|f| f.role == FormRole::Printed).count();
            assert_eq!(printed, 1, "{}", e.id);
            match e.status {
                Status::Suspect => assert!(variants >= 1, "{}", e.id),
                Status::ExpectedPass => assert_eq!(variants, 0, "{}", e.id),
            }
        }
    }
}
