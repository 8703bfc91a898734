//! Eigenvalue enclosures from the KS norm, the one-dimensional
//! sharp bound, and empirical studies of the unspecified constant.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::norms::{aux_norm, ks_norm, NormKind, NormRequest};
use crate::potential::PotentialSpec;
use crate::scalar::{Cx, Real};

/// Cells per axis for `int |V|` in one-dimensional mode.
const L1_CELLS: usize = 1 << 14;
const PASS_SLACK: f64 = 1e-12;

/// `beta = (2 alpha - d + 1) / 2`.
pub fn beta_of<T: Real>(d: usize, alpha: T) -> T {
    (T::lit(2.0) * alpha - T::from_usize_lossy(d) + T::one()) / T::lit(2.0)
}

/// `e = (alpha - d + 1) / (2 alpha - d + 1)`.
pub fn exponent_of<T: Real>(d: usize, alpha: T) -> T {
    let dd = T::from_usize_lossy(d);
    (alpha - dd + T::one()) / (T::lit(2.0) * alpha - dd + T::one())
}

/// Admitted `alpha`: `[2, 3)` for d = 3, `[3/2, 2)` for d = 2.
pub fn check_admitted_alpha<T: Real>(d: usize, alpha: T) -> Result<()> {
    let (lo, hi) = match d {
        2 => (1.5, 2.0),
        3 => (2.0, 3.0),
        1 => return Ok(()),
        _ => return Err(Error::UnsupportedDimension(d)),
    };
    if alpha >= T::lit(lo) && alpha < T::lit(hi) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "alpha = {alpha} outside [{lo}, {hi}) for d = {d}"
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EigenCheck<T: Real> {
    pub lambda: Cx<T>,
    /// `|lambda|^e`.
    pub lhs: T,
    /// `C * ksValue`.
    pub rhs: T,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum EnclosureMode {
    /// `|lambda|^e <= C ||V^beta||_{KS_alpha}^{1/beta}`.
    General,
    /// `|lambda|^{1/2} <= (1/2) int |V|` in one dimension.
    Dim1,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EnclosureReport<T: Real> {
    pub mode: EnclosureMode,
    pub d: usize,
    pub alpha: T,
    pub beta: T,
    pub exponent: T,
    /// `||V^beta||_{KS_alpha}^{1/beta}`; `int |V|` in one dimension.
    pub ks_value: T,
    pub constant: T,
    /// Disk radius `(C ksValue)^{1/e}` in the lambda plane, when `e > 0`.
    pub radius: Option<T>,
    /// Scale-free value `C ksValue`, when `e = 0`: below 1 there is no eigenvalue.
    pub criterion: Option<T>,
    pub checks: Vec<EigenCheck<T>>,
    /// `e = 0`, eigenvalues supplied and `C ksValue < 1`.
    pub contradiction: bool,
    pub pass: bool,
    pub notes: Vec<String>,
}

/// `||V^beta||_{KS_alpha}^{1/beta}`, zero for a vanishing potential.
pub fn ks_value<T: Real>(v: &PotentialSpec<T>, request: &NormRequest<T>) -> Result<T> {
    match ks_norm(v, request) {
        Ok(r) => Ok(r.value.powf(T::one() / request.beta)),
        Err(Error::ZeroPotential) => Ok(T::zero()),
        Err(e) => Err(e),
    }
}

/// Both sides of the enclosure for every listed eigenvalue. `ks_level`
/// overrides the per-cube resolution of the KS evaluation.
pub fn enclosure_report<T: Real>(
    v: &PotentialSpec<T>,
    alpha: T,
    constant: T,
    eigenvalues: &[Cx<T>],
    ks_level: Option<u32>,
) -> Result<EnclosureReport<T>> {
    if !(constant > T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "constant must be positive, got {constant}"
        )));
    }
    let d = v.d;
    check_admitted_alpha(d, alpha)?;
    for l in eigenvalues {
        crate::branch::sqrt_branch(*l)?;
    }
    let mut notes = Vec::new();
    let (mode, alpha, beta, e, ks, constant) = if d == 1 {
        notes.push("one-dimensional mode: constant fixed at 1/2, ksValue is int |V|".to_string());
        let half = T::lit(0.5);
        (
            EnclosureMode::Dim1,
            T::zero(),
            T::one(),
            half,
            v.l1_norm(L1_CELLS)?,
            half,
        )
    } else {
        let beta = beta_of(d, alpha);
        let mut req = NormRequest::ks(d, alpha, beta);
        if let Some(l) = ks_level {
            req = req.with_level(l);
        }
        if d == 3 && alpha == T::lit(2.0) {
            notes.push("scale-free case alpha = d - 1 = 2 with beta = 1; the readings alpha = 3/2 and alpha = 3 are not used".to_string());
        }
        (
            EnclosureMode::General,
            alpha,
            beta,
            exponent_of(d, alpha),
            ks_value(v, &req)?,
            constant,
        )
    };
    let rhs = constant * ks;
    let checks: Vec<EigenCheck<T>> = eigenvalues
        .iter()
        .map(|&lambda| {
            let lhs = lambda.norm().powf(e);
            EigenCheck {
                lambda,
                lhs,
                rhs,
                pass: lhs <= rhs * T::lit(1.0 + PASS_SLACK),
            }
        })
        .collect();
    let scale_free = e == T::zero();
    let contradiction = scale_free && !eigenvalues.is_empty() && rhs < T::one();
    if contradiction {
        notes.push(
            "eigenvalues supplied although C * ksValue < 1: discretisation error or C too small"
                .to_string(),
        );
    }
    Ok(EnclosureReport {
        mode,
        d,
        alpha,
        beta,
        exponent: e,
        ks_value: ks,
        constant,
        radius: (!scale_free).then(|| rhs.powf(T::one() / e)),
        criterion: scale_free.then_some(rhs),
        pass: checks.iter().all(|c| c.pass) && !contradiction,
        checks,
        contradiction,
        notes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EmpiricalConstant<T: Real> {
    pub d: usize,
    pub alpha: T,
    pub value: T,
    /// `|lambda|^e / ksValue` per member, maximised over its eigenvalues.
    pub ratios: Vec<Option<T>>,
    pub corpus_hash: String,
}

/// SHA-256 of the corpus (potentials and eigenvalues) in a fixed textual form.
pub fn corpus_hash<T: Real>(corpus: &[(PotentialSpec<T>, Vec<Cx<T>>)]) -> String {
    let mut h = Sha256::new();
    for (v, ls) in corpus {
        h.update(format!("{v:?}|{ls:?};").as_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Best constant seen: `sup |lambda|^e / ksValue` over the corpus.
/// In one dimension `ksValue` is `int |V|` and the sharp constant is 1/2.
pub fn empirical_constant<T: Real>(
    corpus: &[(PotentialSpec<T>, Vec<Cx<T>>)],
    alpha: T,
    ks_level: Option<u32>,
) -> Result<EmpiricalConstant<T>> {
    let Some(first) = corpus.first() else {
        return Err(Error::InvalidParameter("empty corpus".into()));
    };
    let d = first.0.d;
    if corpus.iter().any(|(v, _)| v.d != d) {
        return Err(Error::InvalidParameter("corpus mixes dimensions".into()));
    }
    let ratios = corpus
        .par_iter()
        .enumerate()
        .map(|(i, (v, ls))| -> Result<Option<T>> {
            if ls.is_empty() {
                return Ok(None);
            }
            let r = enclosure_report(v, alpha, T::one(), &[], ks_level)?;
            if r.ks_value == T::zero() {
                return Err(Error::Inconsistent(format!(
                    "member {i} has eigenvalues but a vanishing norm"
                )));
            }
            let top = ls
                .iter()
                .map(|l| l.norm().powf(r.exponent))
                .fold(T::zero(), T::max);
            Ok(Some(top / r.ks_value))
        })
        .collect::<Result<Vec<_>>>()?;
    let value = ratios.iter().flatten().fold(T::zero(), |a, &b| a.max(b));
    Ok(EmpiricalConstant {
        d,
        alpha: if d == 1 { T::zero() } else { alpha },
        value,
        ratios,
        corpus_hash: corpus_hash(corpus),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LedgerRecord {
    pub alpha: f64,
    pub d: usize,
    pub value: f64,
    pub corpus_hash: String,
    /// Seconds since the Unix epoch of the last increase.
    pub timestamp: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ledger {
    pub schema_version: u32,
    pub records: Vec<LedgerRecord>,
}

impl Default for Ledger {
    fn default() -> Self {
        Ledger {
            schema_version: 1,
            records: Vec::new(),
        }
    }
}

impl Ledger {
    pub fn load(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Ok(Ledger::default());
        }
        let l: Ledger = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        if l.schema_version != 1 {
            return Err(Error::Parse(format!(
                "unsupported ledger schema_version {}",
                l.schema_version
            )));
        }
        Ok(l)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("json.tmp");
        std::fs::write(&tmp, serde_json::to_string_pretty(self)? + "\n")?;
        std::fs::rename(tmp, path)?;
        Ok(())
    }

    /// Raises the `(d, alpha)` record to `value` if larger; never lowers it.
    /// Returns the record after the update.
    pub fn raise(
        &mut self,
        d: usize,
        alpha: f64,
        value: f64,
        corpus_hash: &str,
        timestamp: u64,
    ) -> LedgerRecord {
        let fresh = LedgerRecord {
            alpha,
            d,
            value,
            corpus_hash: corpus_hash.to_string(),
            timestamp,
        };
        match self
            .records
            .iter_mut()
            .find(|r| r.d == d && r.alpha == alpha)
        {
            Some(r) => {
                if value > r.value {
                    *r = fresh;
                }
                r.clone()
            }
            None => {
                self.records.push(fresh.clone());
                fresh
            }
        }
    }
}

/// Loads the ledger at `path`, raises it with `c`, and writes it back.
pub fn update_ledger<T: Real>(path: &Path, c: &EmpiricalConstant<T>) -> Result<LedgerRecord> {
    let mut ledger = Ledger::load(path)?;
    let now = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let rec = ledger.raise(
        c.d,
        c.alpha.to_f64_lossy(),
        c.value.to_f64_lossy(),
        &c.corpus_hash,
        now,
    );
    ledger.save(path)?;
    Ok(rec)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ChainParameters<T: Real> {
    pub delta: T,
    pub beta: T,
    pub alpha: T,
    pub p_min: T,
    pub p_max: T,
}

/// `delta = 2d/(2 gamma + d)`, and `alpha = delta beta` solved jointly with
/// `beta = (2 alpha - d + 1)/2`; admissible `p` lies in `(p_min, p_max]`.
pub fn chain_parameters<T: Real>(d: usize, gamma: T) -> Result<ChainParameters<T>> {
    if !(2..=3).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    let half = T::lit(0.5);
    if !(gamma > T::zero() && gamma < half) {
        return Err(Error::InvalidParameter(format!(
            "gamma must lie in (0, 1/2), got {gamma}"
        )));
    }
    let dd = T::from_usize_lossy(d);
    let two = T::lit(2.0);
    let delta = two * dd / (two * gamma + dd);
    if !(delta > T::one() && delta < two) {
        return Err(Error::InvalidParameter(format!(
            "degenerate delta = {delta}"
        )));
    }
    let beta = (dd - T::one()) / (two * (delta - T::one()));
    let alpha = delta * beta;
    if !(alpha < dd) {
        return Err(Error::InvalidParameter(format!(
            "alpha = {alpha} not below d"
        )));
    }
    Ok(ChainParameters {
        delta,
        beta,
        alpha,
        p_min: (dd - T::one()) * (two * gamma + dd) / (two * (dd - two * gamma)),
        p_max: gamma + dd / two,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ChainCheck<T: Real> {
    pub parameters: ChainParameters<T>,
    pub p: T,
    /// `||V^beta||_{KS_alpha}^{1/beta}`.
    pub lhs_norm: T,
    /// `||V||_{L^{delta,p}}` (Morrey-Campanato).
    pub rhs_norm: T,
    pub ratio: Option<T>,
    pub slack: T,
    pub pass: bool,
}

/// Compares the KS side of the enclosure with the Morrey-Campanato norm it
/// is dominated by. `ks` and `mc` supply resolutions; their kinds and
/// exponents are overwritten.
pub fn chain_check<T: Real>(
    v: &PotentialSpec<T>,
    gamma: T,
    p: T,
    slack: T,
    ks: Option<NormRequest<T>>,
    mc: Option<NormRequest<T>>,
) -> Result<ChainCheck<T>> {
    let d = v.d;
    let par = chain_parameters(d, gamma)?;
    if !(p > par.p_min && p <= par.p_max) {
        return Err(Error::InvalidParameter(format!(
            "p = {p} outside ({}, {}]",
            par.p_min, par.p_max
        )));
    }
    let ks_kind = NormKind::Ks { alpha: par.alpha };
    let mut ks = ks.unwrap_or_else(|| NormRequest::new(ks_kind, d));
    ks.kind = ks_kind;
    ks.beta = par.beta;
    let mc_kind = NormKind::MorreyCampanato {
        alpha: par.delta,
        p,
    };
    let mut mc = mc.unwrap_or_else(|| NormRequest {
        radii_per_octave: 4,
        ..NormRequest::new(mc_kind, d)
    });
    mc.kind = mc_kind;
    mc.beta = T::one();
    let lhs = ks_value(v, &ks)?;
    let rhs = aux_norm(v, &mc)?.value;
    Ok(ChainCheck {
        parameters: par,
        p,
        lhs_norm: lhs,
        rhs_norm: rhs,
        ratio: (rhs > T::zero()).then(|| lhs / rhs),
        slack,
        pass: lhs <= rhs * (T::one() + slack),
    })
}

/// `||(a/|x|^2)^beta||_{KS_{d-1}}^{1/beta}` for `a/|x|^2` truncated to
/// `inner <= |x| <= outer`, d = 3, alpha = 2, beta = 1. The dyadic search
/// spans generations from the outer radius down past the inner one.
pub fn inverse_square_criterion<T: Real>(
    a: T,
    d: usize,
    alpha: T,
    inner: T,
    outer: T,
    level: Option<u32>,
) -> Result<T> {
    if d != 3 {
        return Err(Error::UnsupportedDimension(d));
    }
    let beta = beta_of(d, alpha);
    if alpha != T::from_usize_lossy(d - 1) || T::lit(2.0) * beta != alpha {
        return Err(Error::InvalidParameter(format!(
            "inverse-square criterion needs alpha = d - 1 = 2beta, got alpha = {alpha}, beta = {beta}"
        )));
    }
    if !(a >= T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "strength must be nonnegative, got {a}"
        )));
    }
    if a == T::zero() {
        return Ok(T::zero());
    }
    let v = PotentialSpec::inverse_square(d, a, T::lit(2.0), inner, outer)?;
    let k_min = -(outer.log2().ceil().to_f64_lossy() as i32) - 1;
    let k_max = (T::one() / inner).log2().ceil().to_f64_lossy() as i32 + 1;
    let mut req = NormRequest::ks(d, alpha, beta).with_depth(k_min, k_max);
    if let Some(l) = level {
        req = req.with_level(l);
    }
    ks_value(&v, &req)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn exponent_identities() {
        assert_eq!(exponent_of(3, 2.0), 0.0);
        assert_eq!(exponent_of(2, 1.0), 0.0);
        assert!((exponent_of(3, 3.0f64 - 1e-9) - 0.25).abs() < 1e-9);
        assert!((exponent_of(2, 2.0f64 - 1e-9) - 1.0 / 3.0).abs() < 1e-9);
        assert_eq!(exponent_of(2, 1.5), 0.25);
        assert_eq!(beta_of(2, 1.5), 1.0);
        assert_eq!(beta_of(3, 2.0), 1.0);
    }

    #[test]
    fn alpha_range_enforced() {
        let v = PotentialSpec::<f64>::unit_cube(3, 1.0).unwrap();
        assert!(enclosure_report(&v, 1.5, 1.0, &[], None).is_err());
        assert!(enclosure_report(&v, 3.0, 1.0, &[], None).is_err());
        let w = PotentialSpec::<f64>::unit_cube(2, 1.0).unwrap();
        assert!(enclosure_report(&w, 1.0, 1.0, &[], None).is_err());
    }

    #[test]
    fn one_dimensional_well() {
        let v = PotentialSpec::square_well(1, Complex64::new(-2.0, 0.0), 0.5, &[0.0]).unwrap();
        let l = Complex64::new(-0.615843185407225, 0.0);
        let r = enclosure_report(&v, 0.0, 1.0, &[l], None).unwrap();
        assert_eq!(r.mode, EnclosureMode::Dim1);
        assert_eq!(r.constant, 0.5);
        assert!((r.ks_value - 2.0).abs() < 1e-12);
        let ratio = r.checks[0].lhs / r.checks[0].rhs;
        assert!((ratio - 0.785).abs() < 1e-3 && r.pass);
        assert!((r.radius.unwrap() - 1.0).abs() < 1e-12);

        let c = empirical_constant(&[(v, vec![l])], 0.0, None).unwrap();
        assert!((c.value - 0.392).abs() < 1e-3);
        assert!(empirical_constant::<f64>(&[], 0.0, None).is_err());
    }

    #[test]
    fn zero_potential_is_vacuous() {
        let v = PotentialSpec::<f64>::unit_cube(3, 0.0).unwrap();
        let r = enclosure_report(&v, 2.0, 1.0, &[], None).unwrap();
        assert_eq!(r.ks_value, 0.0);
        assert_eq!(r.criterion, Some(0.0));
        assert!(r.pass && !r.contradiction);
        let r = enclosure_report(&v, 2.0, 1.0, &[Complex64::new(-1.0, 0.0)], None).unwrap();
        assert!(r.contradiction && !r.pass);
        let e = empirical_constant(&[(v, vec![Complex64::new(-1.0, 0.0)])], 2.0, None).unwrap_err();
        assert!(matches!(e, Error::Inconsistent(_)));
    }

    #[test]
    fn chain_parameters_for_quarter() {
        let p = chain_parameters::<f64>(3, 0.25).unwrap();
        assert!((p.delta - 12.0 / 7.0).abs() < 1e-14);
        assert!((p.beta - 1.4).abs() < 1e-14);
        assert!((p.alpha - 2.4).abs() < 1e-14);
        assert!((p.p_min - 1.4).abs() < 1e-14 && (p.p_max - 1.75).abs() < 1e-14);
        assert!(chain_parameters::<f64>(3, 0.5).is_err());
        let v = PotentialSpec::<f64>::unit_cube(3, 1.0).unwrap();
        assert!(chain_check(&v, 0.25, 1.8, 0.05, None, None).is_err());
    }

    #[test]
    fn ledger_is_monotone() {
        let mut l = Ledger::default();
        assert_eq!(l.raise(1, 0.0, 0.3, "a", 1).value, 0.3);
        assert_eq!(l.raise(1, 0.0, 0.2, "b", 2).value, 0.3);
        let r = l.raise(1, 0.0, 0.4, "c", 3);
        assert_eq!(
            (r.value, r.corpus_hash.as_str(), r.timestamp),
            (0.4, "c", 3)
        );
        assert_eq!(l.records.len(), 1);
    }
}
