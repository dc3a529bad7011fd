use std::fmt;

use crate::error::{Error, Result};
use crate::koszul::CoboundarySolver;
use crate::polyring::{HSeries, Poly};

use super::lifting::{
    anomaly, check_lifting, extend_lifting, CorrectionStep, DegreePolicy, Extension, Lifting,
    LiftingCheck, Obstruction,
};

/// Commuting lifts `F_1..F_k` of `f` to order `L`, with the history that produced them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub system: Vec<Poly>,
    pub order: usize,
    /// Truncation `order`; pairwise commutators vanish modulo `hbar^(order+2)`.
    pub series: Vec<HSeries>,
    /// Highest hbar order of the commutators that was checked.
    pub max_order_checked: usize,
    /// Nontrivial corrections only, by increasing level.
    pub corrections: Vec<CorrectionStep>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Quantization {
    Quantised(Certificate),
    Obstructed(Obstruction),
}

/// Runs the extension step from the 0-lifting `F = f` up to level `order`.
pub fn quantize(
    fs: &[Poly],
    order: usize,
    policy: &DegreePolicy,
    solver: &dyn CoboundarySolver,
) -> Result<Quantization> {
    let mut lifting = Lifting::trivial(fs)?;
    let mut corrections = Vec::new();
    while lifting.level() < order {
        match extend_lifting(&lifting, policy, solver)? {
            Extension::Lifted {
                lifting: next,
                correction,
            } => {
                corrections.extend(correction);
                lifting = next;
            }
            Extension::Obstructed(o) => return Ok(Quantization::Obstructed(o)),
        }
    }
    let cert = Certificate {
        system: fs.to_vec(),
        order,
        series: lifting.into_series(),
        max_order_checked: order + 1,
        corrections,
    };
    let report = verify_certificate(&cert);
    if !report.ok() {
        return Err(Error::Internal(format!(
            "freshly built certificate fails verification: {}",
            report.failure.unwrap()
        )));
    }
    Ok(Quantization::Quantised(cert))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerificationFailure {
    Malformed(String),
    SymbolMismatch {
        index: usize,
    },
    Commutator {
        i: usize,
        j: usize,
        order: usize,
        coefficient: Poly,
    },
    LogMismatch {
        level: usize,
        detail: String,
    },
}

impl fmt::Display for VerificationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerificationFailure::Malformed(s) => write!(f, "malformed certificate: {s}"),
            VerificationFailure::SymbolMismatch { index } => {
                write!(
                    f,
                    "symbol mismatch: hbar^0 part of F{} differs from f{}",
                    index + 1,
                    index + 1
                )
            }
            VerificationFailure::Commutator {
                i,
                j,
                order,
                coefficient,
            } => write!(
                f,
                "[F{},F{}] has hbar^{order} coefficient {coefficient}",
                i + 1,
                j + 1
            ),
            VerificationFailure::LogMismatch { level, detail } => {
                write!(f, "correction log mismatch at level {level}: {detail}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub max_order_checked: usize,
    pub failure: Option<VerificationFailure>,
}

impl VerificationReport {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }
}

/// Recomputes everything a certificate claims: symbols, the vanishing of all
/// pairwise commutators through `hbar^(L+1)`, and a replay of the correction
/// log from `F = f` that must reproduce the stored series exactly.
pub fn verify_certificate(c: &Certificate) -> VerificationReport {
    let max_order_checked = c.order + 1;
    VerificationReport {
        max_order_checked,
        failure: find_failure(c).err(),
    }
}

fn find_failure(c: &Certificate) -> std::result::Result<(), VerificationFailure> {
    use VerificationFailure::*;
    let malformed = |s: String| Malformed(s);
    if c.system.is_empty() || c.series.len() != c.system.len() {
        return Err(malformed(format!(
            "{} generators but {} series",
            c.system.len(),
            c.series.len()
        )));
    }
    let n = c.system[0].n();
    for (idx, (s, f)) in c.series.iter().zip(&c.system).enumerate() {
        if s.n() != n || f.n() != n {
            return Err(malformed("mixed numbers of variables".into()));
        }
        if s.truncation() != c.order {
            return Err(malformed(format!(
                "F{} has truncation {} instead of {}",
                idx + 1,
                s.truncation(),
                c.order
            )));
        }
        if s.symbol() != f {
            return Err(SymbolMismatch { index: idx });
        }
    }
    if c.max_order_checked != c.order + 1 {
        return Err(malformed(format!(
            "claims residuals checked to hbar^{} for order {}",
            c.max_order_checked, c.order
        )));
    }

    match check_lifting(&c.series, c.order) {
        Ok(LiftingCheck::Holds) => {}
        Ok(LiftingCheck::Fails {
            i,
            j,
            order,
            coefficient,
        }) => {
            return Err(Commutator {
                i,
                j,
                order,
                coefficient,
            })
        }
        Err(e) => return Err(malformed(e.to_string())),
    }

    let mut log = c.corrections.iter().peekable();
    let mut g: Vec<HSeries> = c
        .system
        .iter()
        .map(|f| HSeries::from_poly(f.clone(), 0))
        .collect();
    for level in 0..c.order {
        g = g.iter().map(|s| s.with_truncation(level + 1)).collect();
        let mismatch = |detail: String| LogMismatch { level, detail };
        let chi = anomaly(&g, level).map_err(|e| mismatch(e.to_string()))?;
        let step = log.next_if(|s| s.level == level);
        match step {
            None if chi.is_zero() => continue,
            None => return Err(mismatch(format!("unrecorded nonzero anomaly {chi}"))),
            Some(step) => {
                if step.anomaly != chi {
                    return Err(mismatch(format!(
                        "recorded anomaly {} but recomputed {chi}",
                        step.anomaly
                    )));
                }
                if step.correction.len() != g.len() || step.correction.iter().any(|m| m.n() != n) {
                    return Err(mismatch("correction has the wrong shape".into()));
                }
                for (s, m) in g.iter_mut().zip(&step.correction) {
                    s.set_coeff(level + 1, &s.coeff(level + 1) - m);
                }
                match check_lifting(&g, level + 1) {
                    Ok(LiftingCheck::Holds) => {}
                    _ => return Err(mismatch("correction does not cancel the anomaly".into())),
                }
            }
        }
    }
    if let Some(extra) = log.next() {
        return Err(LogMismatch {
            level: extra.level,
            detail: "entry out of order or beyond the certified order".into(),
        });
    }
    let g: Vec<HSeries> = g.iter().map(|s| s.with_truncation(c.order)).collect();
    if let Some(idx) = (0..g.len()).find(|&i| g[i] != c.series[i]) {
        return Err(LogMismatch {
            level: c.order,
            detail: format!("replayed F{} differs from the stored series", idx + 1),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::koszul::AutoSolver;

    fn poly(s: &str, n: usize) -> Poly {
        Poly::parse(s, n).unwrap()
    }

    fn cert(fs: &[Poly], order: usize) -> Certificate {
        match quantize(fs, order, &DegreePolicy::default(), &AutoSolver).unwrap() {
            Quantization::Quantised(c) => c,
            Quantization::Obstructed(o) => panic!("obstructed: {o:?}"),
        }
    }

    #[test]
    fn hyperbolic_pair_quantises_trivially() {
        let fs = [poly("p1*q1", 2), poly("p2*q2", 2)];
        let c = cert(&fs, 5);
        assert!(c.corrections.is_empty());
        for (s, f) in c.series.iter().zip(&fs) {
            assert_eq!(*s, HSeries::from_poly(f.clone(), 5));
        }
        assert!(verify_certificate(&c).ok());
    }

    #[test]
    fn tampering_is_detected() {
        let fs = [poly("p1*q1", 2), poly("p2*q2", 2)];
        let c = cert(&fs, 5);

        // [q1, p2 q2] = 0, so only the replay notices this one
        let mut t = c.clone();
        t.series[0].set_coeff(1, poly("q1", 2));
        let r = verify_certificate(&t);
        assert!(matches!(
            r.failure,
            Some(VerificationFailure::LogMismatch { .. })
        ));

        let mut t = c.clone();
        t.series[0].set_coeff(1, poly("q2", 2));
        assert!(matches!(
            verify_certificate(&t).failure,
            Some(VerificationFailure::Commutator {
                i: 0,
                j: 1,
                order: 2,
                ..
            })
        ));

        let mut t = c.clone();
        t.series[1].set_coeff(0, poly("p2*q2 + 1", 2));
        assert_eq!(
            verify_certificate(&t).failure,
            Some(VerificationFailure::SymbolMismatch { index: 1 })
        );
    }

    #[test]
    fn zero_order() {
        let c = cert(&[poly("p1", 2), poly("p2", 2)], 0);
        assert_eq!(c.max_order_checked, 1);
        assert!(verify_certificate(&c).ok());
    }

    #[test]
    fn non_involutive_input() {
        assert!(matches!(
            quantize(
                &[poly("p1", 1), poly("q1", 1)],
                2,
                &DegreePolicy::default(),
                &AutoSolver
            ),
            Err(Error::NotInvolutive { i: 0, j: 1, .. })
        ));
    }
}
