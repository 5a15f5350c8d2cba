//! Seeded randomized checks of the lab invariants, reported as JSON records.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{commutator_refine, exp, group_log_l, log_one_plus, phi_log, ChainLab, GroupRing, GroupRingElement};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::rings::RingDescriptor;

#[derive(Clone, Debug, Serialize)]
pub struct LabReport {
    pub check: String,
    pub group: String,
    pub ring: String,
    pub precision: u32,
    pub trials: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

struct Runner<'a> {
    ring: &'a Arc<GroupRing>,
    trials: usize,
    seed: u64,
    out: Vec<LabReport>,
}

impl Runner<'_> {
    fn run(&mut self, check: &str, mut f: impl FnMut(&mut ChaCha8Rng) -> Result<bool>) {
        let mut failures = 0;
        let mut first_failure = None;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ stream_id(check));
        for _ in 0..self.trials {
            let msg = match f(&mut rng) {
                Ok(true) => continue,
                Ok(false) => "identity does not hold".to_string(),
                Err(e) => e.to_string(),
            };
            failures += 1;
            first_failure.get_or_insert(msg);
        }
        self.out.push(LabReport {
            check: check.into(),
            group: self.ring.group().label().into(),
            ring: self.ring.descriptor().label(),
            precision: self.ring.n(),
            trials: self.trials,
            failures,
            first_failure,
        });
    }
}

fn stream_id(check: &str) -> u64 {
    check.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

/// p-power making 1 + p^e·x lie in the domain of exp∘log for any x in R[G].
fn radical_exponent(ring: &GroupRing) -> u32 {
    if ring.p() == 2 && !ring.group().is_p_group(2) {
        2
    } else {
        1
    }
}

/// Groups of lab checks selectable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LabSuite {
    All,
    ExpLog,
    Trace,
    Integrality,
    Refine,
    Xi,
    XiLog,
}

impl LabSuite {
    pub fn parse(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|_| {
            Error::InvalidInput(format!(
                "unknown suite `{s}` (expected all, exp-log, trace, integrality, refine, xi, xi-log)"
            ))
        })
    }

    fn runs(&self, s: LabSuite) -> bool {
        *self == LabSuite::All || *self == s
    }
}

/// Runs the selected lab invariants `trials` times on (group, ring) with a
/// fixed seed; each check draws from its own stream.
pub fn run_lab_checks(
    group: &FiniteGroup,
    ring: &RingDescriptor,
    suite: LabSuite,
    trials: usize,
    seed: u64,
) -> Result<Vec<LabReport>> {
    let ring = GroupRing::new(group.clone(), ring)?;
    let p = ring.p();
    let pgroup = ring.group().is_p_group(p);
    let e = radical_exponent(&ring);
    let pe = ring.model().zpn().p_pow(e) as i64;
    let one = GroupRingElement::one(&ring);
    let mut r = Runner { ring: &ring, trials, seed, out: Vec::new() };
    let small = |rng: &mut ChaCha8Rng| GroupRingElement::random_augmentation_zero(&ring, rng).scale_int(pe);
    let unit = |rng: &mut ChaCha8Rng| -> GroupRingElement {
        let x = GroupRingElement::random_augmentation_zero(&ring, rng);
        if pgroup {
            one.add(&x)
        } else {
            one.add(&x.scale_int(pe))
        }
    };

    if suite.runs(LabSuite::ExpLog) {
        r.run("exp_log_roundtrip", |rng| {
            let x = small(rng);
            let back = exp(&log_one_plus(&x)?.to_integral()?)?.to_integral()?;
            Ok(back == one.add(&x))
        });
    }
    if suite.runs(LabSuite::Trace) {
        r.run("phi_log_commutator", |rng| {
            let (u, v) = (unit(rng), unit(rng));
            Ok(phi_log(&GroupRingElement::commutator(&u, &v)?)?.is_zero())
        });
    }
    if suite == LabSuite::Integrality && !pgroup {
        return Err(Error::Hypothesis(format!("the integrality check needs a {p}-group")));
    }
    if suite.runs(LabSuite::Integrality) && pgroup {
        r.run("group_log_integrality", |rng| {
            let l = group_log_l(&unit(rng))?;
            Ok(l.min_valuation().map_or(true, |v| v >= 1))
        });
    }
    if suite.runs(LabSuite::Refine) {
        let k = 2;
        if ring.n() <= k {
            if suite == LabSuite::Refine {
                return Err(Error::Precision { needed: k + 1, have: ring.n() });
            }
        } else {
            let pk = ring.model().zpn().p_pow(k) as i64;
            let order = ring.group().order() as u32;
            r.run("commutator_refine_roundtrip", |rng| {
                let mut x = one.clone();
                for _ in 0..rng.gen_range(1..=3) {
                    let g = GroupRingElement::basis(&ring, rng.gen_range(0..order));
                    let mu = GroupRingElement::random(&ring, rng).scale_int(pk);
                    x = x.mul(&GroupRingElement::commutator(&g, &one.add(&mu))?);
                }
                let f = commutator_refine(&x, k, ring.n() - k)?;
                Ok(f.product(&one)?.sub(&x).valuation() >= f.precision)
            });
        }
    }
    let wants_chains = suite.runs(LabSuite::Xi) || (suite.runs(LabSuite::XiLog) && pgroup);
    if suite == LabSuite::XiLog && !pgroup {
        return Err(Error::Hypothesis(format!("the ξ/ℒ identity needs a {p}-group")));
    }
    if wants_chains {
        let mut lab = match ChainLab::new(&ring) {
            Ok(lab) => lab,
            Err(Error::GroupTooLarge { .. }) if suite == LabSuite::All => return Ok(r.out),
            Err(e) => return Err(e),
        };
        if suite.runs(LabSuite::Xi) {
            r.run("xi_homomorphism", |rng| {
                let (u, v) = (unit(rng), unit(rng));
                Ok(lab.xi(&u.mul(&v))? == lab.add(&lab.xi(&u)?, &lab.xi(&v)?))
            });
            r.run("xi_commutator_vanishes", |rng| {
                let (u, v) = (unit(rng), unit(rng));
                Ok(lab.xi(&GroupRingElement::commutator(&u, &v)?)?.is_zero())
            });
        }
        if suite.runs(LabSuite::XiLog) && pgroup {
            r.run("xi_log_identity", |rng| Ok(lab.xi_log_identity(&unit(rng))?.holds));
        }
    }
    Ok(r.out)
}
