//! Registry of seeded numerical checks, one per equation of the theory, and
//! the runner that turns them into reports.
//!
//! Each entry draws random inputs, evaluates both sides through independent
//! routes and records the scale-free residual of every form it knows. Suspect
//! entries carry the printed form and one or more corrected variants; the
//! report names the variant that passed.

mod checks_gamma;
mod checks_incexp;
pub mod draw;
mod registry;
mod support;

use serde::{Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::error::{MgfError, Result};
pub use draw::{Draw, SpectralBox};
pub use registry::{registry, supplementary, MANIFEST};

/// Whether the printed statement is expected to hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    ExpectedPass,
    Suspect,
}

/// How the side that does not go through the verified routine is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndependentSide {
    Quadrature,
    FiniteDifference,
    ContourIntegral,
    ScalarReference,
    AlternateSeries,
    ClosedForm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormRole {
    Printed,
    Variant,
}

/// One way of writing the identity; a checker returns one residual per form.
#[derive(Clone, Copy, Debug)]
pub struct Form {
    pub name: &'static str,
    pub role: FormRole,
}

pub type Checker = fn(&mut Draw) -> Result<Vec<f64>>;

#[derive(Clone, Copy)]
pub struct IdentityEntry {
    pub id: &'static str,
    pub description: &'static str,
    pub status: Status,
    pub independent: IndependentSide,
    pub forms: &'static [Form],
    pub tol: f64,
    pub max_dim: usize,
    /// Upper bound on trials per dimension for expensive checks.
    pub trial_cap: Option<usize>,
    pub commuting: bool,
    pub checker: Checker,
}

impl std::fmt::Debug for IdentityEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IdentityEntry")
            .field("id", &self.id)
            .field("status", &self.status)
            .field("tol", &self.tol)
            .finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    SuspectResolved,
    SuspectUnresolved,
}

#[derive(Clone, Debug, Serialize)]
pub struct WorstInput {
    pub digest: String,
    pub dim: usize,
    pub trial: usize,
    pub inputs: serde_json::Value,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub id: String,
    pub seed: u64,
    pub trials: usize,
    pub dims: Vec<usize>,
    #[serde(serialize_with = "real_or_string")]
    pub max_residual: f64,
    pub tol: f64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_input: Option<WorstInput>,
}

fn real_or_string<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_str(&v.to_string())
    }
}

impl IdentityReport {
    /// Only an expected-pass entry can fail the suite.
    pub fn is_failure(&self) -> bool {
        self.verdict == Verdict::Fail
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    Quick,
    Full,
}

impl Profile {
    pub fn trials(self) -> usize {
        match self {
            Profile::Quick => 10,
            Profile::Full => 100,
        }
    }

    pub fn dims(self) -> &'static [usize] {
        match self {
            Profile::Quick => &[1, 2],
            Profile::Full => &[1, 2, 3, 4],
        }
    }
}

impl std::str::FromStr for Profile {
    type Err = MgfError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Profile::Quick),
            "full" => Ok(Profile::Full),
            other => Err(MgfError::Domain(format!("unknown profile '{other}'"))),
        }
    }
}

const MAX_ATTEMPTS: usize = 25;

pub fn lookup(id: &str) -> Result<&'static IdentityEntry> {
    registry()
        .iter()
        .chain(supplementary().iter())
        .find(|e| e.id == id)
        .ok_or_else(|| MgfError::UnknownIdentity(id.to_string()))
}

fn trial_seed(seed: u64, id: &str, dim: usize, trial: usize, attempt: usize) -> u64 {
    let h = Sha256::digest(format!("{seed}:{id}:{dim}:{trial}:{attempt}").as_bytes());
    u64::from_le_bytes(h[..8].try_into().expect("8 bytes"))
}

fn digest_of(v: &serde_json::Value) -> String {
    let h = Sha256::digest(v.to_string().as_bytes());
    h.iter().take(16).map(|b| format!("{b:02x}")).collect()
}

struct FormStats {
    max: f64,
    worst: Option<WorstInput>,
}

/// Runs `id` for `trials` trials at dimension `dim` (clamped to the entry's
/// largest supported size).
pub fn run_identity(
    id: &str,
    seed: u64,
    trials: usize,
    dim: usize,
    tol_override: Option<f64>,
) -> Result<IdentityReport> {
    run_entry(lookup(id)?, seed, trials, &[dim], tol_override)
}

/// Runs every registered identity under `profile`, in registry order.
pub fn run_all(seed: u64, profile: Profile) -> Vec<IdentityReport> {
    registry()
        .iter()
        .map(|e| {
            run_entry(e, seed, profile.trials(), profile.dims(), None).unwrap_or_else(|err| {
                IdentityReport {
                    id: e.id.to_string(),
                    seed,
                    trials: 0,
                    dims: Vec::new(),
                    max_residual: f64::INFINITY,
                    tol: e.tol,
                    verdict: match e.status {
                        Status::ExpectedPass => Verdict::Fail,
                        Status::Suspect => Verdict::SuspectUnresolved,
                    },
                    variant: None,
                    note: Some(err.to_string()),
                    worst_input: None,
                }
            })
        })
        .collect()
}

/// Runs one entry over several dimensions.
pub fn run_entry(
    e: &IdentityEntry,
    seed: u64,
    trials: usize,
    dims: &[usize],
    tol_override: Option<f64>,
) -> Result<IdentityReport> {
    let tol = tol_override.unwrap_or(e.tol);
    let mut used: Vec<usize> = Vec::new();
    for &d in dims {
        let d = d.clamp(1, e.max_dim);
        if !used.contains(&d) {
            used.push(d);
        }
    }
    let per_dim = e.trial_cap.map_or(trials, |c| trials.min(c));
    let mut stats: Vec<FormStats> = e
        .forms
        .iter()
        .map(|_| FormStats {
            max: 0.0,
            worst: None,
        })
        .collect();
    let mut total = 0;
    for &dim in &used {
        for trial in 0..per_dim {
            let mut outcome = None;
            for attempt in 0..MAX_ATTEMPTS {
                let mut d = Draw::new(trial_seed(seed, e.id, dim, trial, attempt), dim);
                match (e.checker)(&mut d) {
                    Err(MgfError::GeneratorInfeasible(_)) => continue,
                    Err(err) => {
                        let inf = d.failed(err);
                        outcome = Some((vec![inf; e.forms.len()], d));
                    }
                    Ok(v) => outcome = Some((v, d)),
                }
                break;
            }
            let (res, d) = outcome.ok_or_else(|| {
                MgfError::GeneratorInfeasible(format!(
                    "{}: no feasible input after {MAX_ATTEMPTS} attempts (dim {dim}, trial {trial})",
                    e.id
                ))
            })?;
            debug_assert_eq!(res.len(), e.forms.len());
            total += 1;
            for (st, &r) in stats.iter_mut().zip(res.iter()) {
                let r = if r.is_nan() { f64::INFINITY } else { r };
                if st.worst.is_none() || r > st.max {
                    st.max = st.max.max(r);
                    let inputs = d.inputs();
                    st.worst = Some(WorstInput {
                        digest: digest_of(&inputs),
                        dim,
                        trial,
                        inputs,
                        errors: d.errors().to_vec(),
                    });
                }
            }
        }
    }
    let printed: Vec<usize> = (0..e.forms.len())
        .filter(|&i| e.forms[i].role == FormRole::Printed)
        .collect();
    let printed_max = printed.iter().map(|&i| stats[i].max).fold(0.0, f64::max);
    let printed_worst = printed
        .iter()
        .copied()
        .max_by(|&a, &b| stats[a].max.total_cmp(&stats[b].max));
    let (verdict, variant, chosen) = match e.status {
        Status::ExpectedPass => {
            let v = if printed_max <= tol {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            (v, None, printed_worst)
        }
        Status::Suspect => {
            if printed_max <= tol {
                (Verdict::SuspectResolved, Some("as-printed".to_string()), printed_worst)
            } else if let Some(i) = (0..e.forms.len())
                .find(|&i| e.forms[i].role == FormRole::Variant && stats[i].max <= tol)
            {
                (Verdict::SuspectResolved, Some(e.forms[i].name.to_string()), Some(i))
            } else {
                (Verdict::SuspectUnresolved, None, printed_worst)
            }
        }
    };
    let max_residual = chosen.map_or(printed_max, |i| stats[i].max);
    let note = (e.status == Status::Suspect).then(|| {
        let parts: Vec<String> = e
            .forms
            .iter()
            .zip(stats.iter())
            .map(|(f, s)| format!("{}: max residual {:.3e}", f.name, s.max))
            .collect();
        let head = match &variant {
            Some(v) => format!("resolved by {v}"),
            None => "no variant within tolerance".to_string(),
        };
        format!("{head}; {}", parts.join("; "))
    });
    let worst_input = chosen.and_then(|i| stats[i].worst.take());
    Ok(IdentityReport {
        id: e.id.to_string(),
        seed,
        trials: total,
        dims: used,
        max_residual,
        tol,
        verdict,
        variant,
        note,
        worst_input,
    })
}
