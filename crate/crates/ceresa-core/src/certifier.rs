//! The certification driver: per-prime Frobenius-shadow lower bounds and
//! determinant upper bounds, combined by the p-infinity-padded gcd/lcm rule,
//! with machine-checkable JSON certificates.
//!
//! Certificates are serialized canonically: sorted object keys come from
//! struct/field order and BTreeMaps, and every integer is rendered as a
//! decimal string, so byte-identical reruns are diffable and hashable.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{
    factor_u64, partial_factor, v_adic, FactoredInteger, SupernaturalNumber,
};
use crate::bounds::{frobenius_det_bound, BoundMode, DetBound};
use crate::divisor::CurveCtx;
use crate::quartic::TernaryQuarticZ;
use crate::shadows::{frobenius_shadow_ext, ShadowReport};
use crate::zeta::{l_polynomial_genus3, LPolynomial};
use crate::{Error, Result, SCHEMA_VERSION, TOOL_VERSION};

/// Outcome of a certification run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "NON_TORSION_CERTIFIED")]
    NonTorsionCertified,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

/// Everything recomputable about one auxiliary prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeRecord {
    pub p: u64,
    pub point_counts: [String; 3],
    /// L-polynomial coefficients a_0..a_6 as decimal strings.
    pub l_coefficients: Vec<String>,
    /// Number of rational points (shadow support data).
    pub shadow_rational_points: u64,
    /// Exact order of the Frobenius shadow class.
    pub shadow_order: String,
    /// p-stripped order, factored: prime -> exponent.
    pub m_p_stripped: BTreeMap<String, u32>,
    /// Sign of the determinant (audit only; divisibility uses |N_p|).
    pub n_p_sign: i8,
    /// p-stripped |N_p|: small factored part and unfactored cofactor.
    pub n_p_stripped_factors: BTreeMap<String, u32>,
    pub n_p_cofactor: String,
}

/// Combined upper bound: a single residue characteristic keeps the formal
/// p^infinity factor; two or more collapse to an integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum CombinedBound {
    #[serde(rename = "single_prime")]
    SinglePrime { p: u64, n_p: String },
    #[serde(rename = "integer")]
    Integer { value: String, small_factors: BTreeMap<String, u32>, cofactor: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub tool_version: String,
    pub algorithm: String,
    pub bound_mode: String,
    pub curve: Vec<String>,
    pub curve_expression: String,
    pub requested_primes: Vec<u64>,
    /// All primes are taken at this residue degree (reduction over
    /// F_(p^f), the residue field of an inert prime in an auxiliary field).
    pub residue_degree: usize,
    pub seed: u64,
    pub prime_records: Vec<PrimeRecord>,
    /// lcm of the p-stripped shadow orders, factored.
    pub m_tilde: BTreeMap<String, u32>,
    pub n_tilde: CombinedBound,
    pub verdict: Verdict,
    pub early_exit: bool,
    /// Primes contributing a prime factor of M-tilde that is absent from
    /// N-tilde (empty when inconclusive).
    pub witness_primes: Vec<u64>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Certificate> {
        Ok(serde_json::from_str(s)?)
    }
}

fn factored_to_map(f: &BTreeMap<u64, u32>) -> BTreeMap<String, u32> {
    f.iter().map(|(p, e)| (p.to_string(), *e)).collect()
}

fn map_to_factored(m: &BTreeMap<String, u32>) -> Result<BTreeMap<u64, u32>> {
    let mut out = BTreeMap::new();
    for (k, v) in m {
        let p: u64 =
            k.parse().map_err(|_| Error::Certificate(format!("bad prime key {:?}", k)))?;
        out.insert(p, *v);
    }
    Ok(out)
}

fn map_value(m: &BTreeMap<u64, u32>) -> BigUint {
    m.iter().fold(BigUint::one(), |acc, (p, e)| acc * BigUint::from(*p).pow(*e))
}

/// One prime's lower/upper bound pair, in exact form.
#[derive(Debug, Clone)]
pub struct BoundPair {
    pub p: u64,
    /// p-stripped shadow order, fully factored.
    pub m_stripped: BTreeMap<u64, u32>,
    /// p-stripped |N_p| (exact integer).
    pub n_stripped: BigUint,
}

/// Algorithm step (3): M-tilde = lcm of the p-stripped orders (factored) and
/// N-tilde = gcd over primes of p^infinity * N_p, plus the divisibility
/// verdict.
pub fn combine_bounds(records: &[BoundPair]) -> Result<(BTreeMap<u64, u32>, CombinedBound, Verdict)> {
    if records.is_empty() {
        return Err(Error::Precondition("combine_bounds needs at least one record".into()));
    }
    // lcm of factored orders.
    let mut m_tilde: BTreeMap<u64, u32> = BTreeMap::new();
    for r in records {
        for (p, e) in &r.m_stripped {
            let slot = m_tilde.entry(*p).or_insert(0);
            *slot = (*slot).max(*e);
        }
    }
    let chars: std::collections::BTreeSet<u64> = records.iter().map(|r| r.p).collect();
    if chars.len() == 1 {
        let p = records[0].p;
        // N-tilde = p^inf * gcd of the N_p at this characteristic.
        let mut n = records[0].n_stripped.clone();
        for r in &records[1..] {
            n = n.gcd(&r.n_stripped);
        }
        // Divisibility against p^inf * n: strip p from M-tilde, compare.
        let mut m_stripped = m_tilde.clone();
        m_stripped.remove(&p);
        let verdict = if n.is_multiple_of(&map_value(&m_stripped)) {
            Verdict::Inconclusive
        } else {
            Verdict::NonTorsionCertified
        };
        return Ok((m_tilde, CombinedBound::SinglePrime { p, n_p: n.to_string() }, verdict));
    }
    // Two or more residue characteristics: N-tilde is a finite integer.
    // gcd_p (p^(e_p) N_p) with e_p large enough to absorb every other
    // record's p-valuation.
    let mut padded: Vec<BigUint> = Vec::new();
    for r in records {
        let mut e_p: u32 = 0;
        for r2 in records {
            if r2.p != r.p {
                e_p += v_adic(&r2.n_stripped, r.p);
                // m-tilde side can also demand p-powers
                e_p += m_tilde.get(&r.p).copied().unwrap_or(0);
            }
        }
        padded.push(&r.n_stripped * BigUint::from(r.p).pow(e_p));
    }
    let mut n_tilde = padded[0].clone();
    for v in &padded[1..] {
        n_tilde = n_tilde.gcd(v);
    }
    let verdict = if n_tilde.is_multiple_of(&map_value(&m_tilde)) {
        Verdict::Inconclusive
    } else {
        Verdict::NonTorsionCertified
    };
    let pf = partial_factor(&n_tilde);
    Ok((
        m_tilde,
        CombinedBound::Integer {
            value: n_tilde.to_string(),
            small_factors: factored_to_map(&pf.factored.iter().map(|(p, e)| (*p, *e)).collect()),
            cofactor: pf.cofactor.to_string(),
        },
        verdict,
    ))
}

/// The supernatural-number form of the verdict test, for reporting: true
/// iff M-tilde divides N-tilde.
pub fn verdict_divides(m_tilde: &BTreeMap<u64, u32>, n_tilde: &CombinedBound) -> bool {
    match n_tilde {
        CombinedBound::SinglePrime { p, n_p } => {
            let n: BigUint = n_p.parse().expect("decimal");
            let mut m = m_tilde.clone();
            m.remove(p);
            n.is_multiple_of(&map_value(&m))
        }
        CombinedBound::Integer { value, .. } => {
            let n: BigUint = value.parse().expect("decimal");
            n.is_multiple_of(&map_value(m_tilde))
        }
    }
}

/// Which primes to use.
#[derive(Debug, Clone)]
pub enum PrimeSelection {
    Bound { bound: u64, include_3: bool },
    Explicit(Vec<u64>),
}

impl PrimeSelection {
    fn resolve(&self, curve: &TernaryQuarticZ) -> Result<Vec<u64>> {
        match self {
            PrimeSelection::Bound { bound, include_3 } => {
                Ok(curve.good_primes(*bound, *include_3))
            }
            PrimeSelection::Explicit(ps) => {
                let mut out = Vec::new();
                for &p in ps {
                    if p == 2 {
                        return Err(Error::Precondition("2 is never a usable prime".into()));
                    }
                    let good = curve
                        .reduce_mod_unchecked(p)
                        .map(|(fp, c)| crate::quartic::is_smooth_quartic_fp(fp, &c))
                        .unwrap_or(false);
                    if !good {
                        return Err(Error::Precondition(format!("{} is not a good prime", p)));
                    }
                    out.push(p);
                }
                out.sort_unstable();
                out.dedup();
                Ok(out)
            }
        }
    }
}

/// Per-prime computations for the Frobenius-shadow certification.  The
/// residue degree f > 1 runs the step over F_(p^f), the reduction at an
/// inert prime of an auxiliary degree-f field (the verdict then certifies
/// non-torsionness of the base-changed class, which is equivalent).
pub fn prime_record(
    curve: &TernaryQuarticZ,
    p: u64,
    mode: BoundMode,
    residue_degree: usize,
) -> Result<(PrimeRecord, BoundPair)> {
    let cfp = curve.reduce_mod(p)?;
    let n1 = cfp.count_points(1)?;
    let n2 = cfp.count_points(2)?;
    let n3 = cfp.count_points(3)?;
    let l = crate::zeta::l_polynomial_genus3_from_counts(p, n1 as i64, n2 as i64, n3 as i64)?;
    let ctx = CurveCtx::new(cfp)?;
    let shadow = frobenius_shadow_ext(&ctx, &l, residue_degree)?;
    let lq = l.base_change(residue_degree)?;
    let det = frobenius_det_bound(&lq, mode)?;
    Ok(build_record(p, [n1, n2, n3], &l, &shadow, &det))
}

fn build_record(
    p: u64,
    counts: [u64; 3],
    l: &LPolynomial,
    shadow: &ShadowReport,
    det: &DetBound,
) -> (PrimeRecord, BoundPair) {
    let record = PrimeRecord {
        p,
        point_counts: [counts[0].to_string(), counts[1].to_string(), counts[2].to_string()],
        l_coefficients: l.coeffs.iter().map(|c| c.to_string()).collect(),
        shadow_rational_points: shadow.rational_points,
        shadow_order: shadow.order.to_string(),
        m_p_stripped: factored_to_map(&shadow.stripped_order),
        n_p_sign: det.sign,
        n_p_stripped_factors: factored_to_map(&det.stripped.factored),
        n_p_cofactor: det.stripped.cofactor.to_string(),
    };
    let pair = BoundPair {
        p,
        m_stripped: shadow.stripped_order.clone(),
        n_stripped: det.stripped_value(),
    };
    (record, pair)
}

/// Run the Frobenius-shadow certification (Algorithm 1).
pub fn certify(
    curve: &TernaryQuarticZ,
    selection: &PrimeSelection,
    mode: BoundMode,
    seed: u64,
) -> Result<Certificate> {
    certify_with_degree(curve, selection, mode, seed, 1)
}

/// Run the certification with every prime taken at the given residue degree
/// (1 = plain reductions mod p).
pub fn certify_with_degree(
    curve: &TernaryQuarticZ,
    selection: &PrimeSelection,
    mode: BoundMode,
    seed: u64,
    residue_degree: usize,
) -> Result<Certificate> {
    if residue_degree == 0 || residue_degree > 6 {
        return Err(Error::Precondition("residue degree must be in 1..=6".into()));
    }
    if !curve.is_smooth_over_q() {
        return Err(Error::NotSmooth("curve is singular over Q".into()));
    }
    let primes = selection.resolve(curve)?;
    if primes.is_empty() {
        return Err(Error::NoGoodPrime("no good primes in the requested range".into()));
    }
    let mut records: Vec<PrimeRecord> = Vec::new();
    let mut pairs: Vec<BoundPair> = Vec::new();
    let mut early_exit = false;
    for &p in &primes {
        let (rec, pair) = prime_record(curve, p, mode, residue_degree)?;
        records.push(rec);
        pairs.push(pair);
        if pairs.len() >= 2 {
            let (_, _, verdict) = combine_bounds(&pairs)?;
            if verdict == Verdict::NonTorsionCertified && pairs.len() < primes.len() {
                early_exit = true;
                break;
            }
            if verdict == Verdict::NonTorsionCertified {
                break;
            }
        }
    }
    let (m_tilde, n_tilde, verdict) = combine_bounds(&pairs)?;
    let witness_primes = witnesses(&pairs, &m_tilde, &n_tilde);
    Ok(Certificate {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        algorithm: "frobenius_shadow".to_string(),
        bound_mode: mode.as_str().to_string(),
        curve: curve.coeffs().iter().map(|c| c.to_string()).collect(),
        curve_expression: curve.expression(),
        requested_primes: primes,
        residue_degree,
        seed,
        prime_records: records,
        m_tilde: factored_to_map(&m_tilde),
        n_tilde,
        verdict,
        early_exit,
        witness_primes,
    })
}

fn witnesses(
    pairs: &[BoundPair],
    m_tilde: &BTreeMap<u64, u32>,
    n_tilde: &CombinedBound,
) -> Vec<u64> {
    if verdict_divides(m_tilde, n_tilde) {
        return vec![];
    }
    // The primes whose stripped shadow order contributes an l-power that
    // N-tilde lacks.
    let n_val: BigUint = match n_tilde {
        CombinedBound::SinglePrime { n_p, .. } => n_p.parse().unwrap(),
        CombinedBound::Integer { value, .. } => value.parse().unwrap(),
    };
    let single_p = match n_tilde {
        CombinedBound::SinglePrime { p, .. } => Some(*p),
        _ => None,
    };
    let mut out = Vec::new();
    'pairs: for pair in pairs {
        for (l, e) in &pair.m_stripped {
            if Some(*l) == single_p {
                continue;
            }
            if v_adic(&n_val, *l) < *e {
                out.push(pair.p);
                continue 'pairs;
            }
        }
    }
    out
}

/// Recompute every per-prime record and the combination; true iff all match.
pub fn verify_certificate(cert: &Certificate) -> Result<bool> {
    let coeffs: Vec<BigInt> = cert
        .curve
        .iter()
        .map(|s| s.parse::<BigInt>().map_err(|_| Error::Certificate("bad coefficient".into())))
        .collect::<Result<_>>()?;
    let curve = TernaryQuarticZ::new(coeffs)?;
    let mode = BoundMode::parse(&cert.bound_mode)?;
    if cert.algorithm != "frobenius_shadow" && cert.algorithm != "bloch_shadow" {
        return Err(Error::Certificate(format!("unknown algorithm {:?}", cert.algorithm)));
    }
    if cert.algorithm == "bloch_shadow" {
        return crate::bloch::verify_bloch_certificate(cert, &curve, mode);
    }
    // Included primes must be a prefix of the requested ones, all of them
    // unless the run exited early.
    let included: Vec<u64> = cert.prime_records.iter().map(|r| r.p).collect();
    if included.is_empty() || included[..] != cert.requested_primes[..included.len()] {
        return Ok(false);
    }
    if !cert.early_exit && included.len() != cert.requested_primes.len() {
        return Ok(false);
    }
    if cert.residue_degree == 0 || cert.residue_degree > 6 {
        return Ok(false);
    }
    let mut pairs = Vec::new();
    for rec in &cert.prime_records {
        let (fresh, pair) = prime_record(&curve, rec.p, mode, cert.residue_degree)?;
        if fresh != *rec {
            return Ok(false);
        }
        pairs.push(pair);
    }
    let (m_tilde, n_tilde, verdict) = combine_bounds(&pairs)?;
    if factored_to_map(&m_tilde) != cert.m_tilde {
        return Ok(false);
    }
    if n_tilde != cert.n_tilde {
        return Ok(false);
    }
    if verdict != cert.verdict {
        return Ok(false);
    }
    // Verdict consistency with its own bounds.
    let m_map = map_to_factored(&cert.m_tilde)?;
    let divides = verdict_divides(&m_map, &cert.n_tilde);
    let expected = if divides { Verdict::Inconclusive } else { Verdict::NonTorsionCertified };
    Ok(expected == cert.verdict)
}

/// The purely supernatural view of the combination, for small fully
/// factored instances (exercised by tests; production combination uses
/// exact integers to avoid factoring determinant bounds).
pub fn combine_supernatural(
    m_parts: &[FactoredInteger],
    n_parts: &[(u64, FactoredInteger)],
) -> Result<(SupernaturalNumber, SupernaturalNumber, bool)> {
    use crate::arith::{sn_divides, sn_gcd, sn_lcm};
    let ms: Vec<SupernaturalNumber> =
        m_parts.iter().map(SupernaturalNumber::from_factored).collect();
    let m_tilde = sn_lcm(&ms)?;
    let ns: Vec<SupernaturalNumber> = n_parts
        .iter()
        .map(|(p, f)| {
            SupernaturalNumber::from_factored(f).with_prime_infinity(&BigUint::from(*p))
        })
        .collect();
    let n_tilde = sn_gcd(&ns)?;
    let divides = sn_divides(&m_tilde, &n_tilde);
    Ok((m_tilde, n_tilde, divides))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(p: u64, m: &[(u64, u32)], n: u64) -> BoundPair {
        BoundPair {
            p,
            m_stripped: m.iter().copied().collect(),
            n_stripped: BigUint::from(n),
        }
    }

    #[test]
    fn combine_matches_paper_fermat_twist_shape() {
        // records (M = 2368 at 5, M = 2368 at 11, N = 12 both):
        // M-tilde = 2368 does not divide N-tilde = 12.
        let records = vec![
            pair(5, &[(2, 6), (37, 1)], 12),
            pair(11, &[(2, 6), (37, 1)], 12),
        ];
        let (m, n, v) = combine_bounds(&records).unwrap();
        assert_eq!(map_value(&m), BigUint::from(2368u64));
        match &n {
            CombinedBound::Integer { value, .. } => assert_eq!(value, "12"),
            _ => panic!("expected integer bound"),
        }
        assert_eq!(v, Verdict::NonTorsionCertified);
    }

    #[test]
    fn single_prime_needs_outside_support() {
        // With one prime, N-tilde = p^inf N_p: the verdict can only fire
        // when M has a prime factor outside N's support.
        let records = vec![pair(5, &[(2, 2)], 12)];
        let (_, _, v) = combine_bounds(&records).unwrap();
        assert_eq!(v, Verdict::Inconclusive);
        let records = vec![pair(5, &[(23, 1)], 12)];
        let (_, _, v) = combine_bounds(&records).unwrap();
        assert_eq!(v, Verdict::NonTorsionCertified);
        // p-part of the shadow order is forgiven at its own prime.
        let records = vec![pair(5, &[(5, 3)], 12)];
        let (m, _, v) = combine_bounds(&records).unwrap();
        // stripped orders never contain p, but M-tilde could via another
        // prime; here it is just 5^3 which the p^inf absorbs.
        assert_eq!(map_value(&m), BigUint::from(125u64));
        assert_eq!(v, Verdict::Inconclusive);
    }

    #[test]
    fn trivial_orders_always_inconclusive() {
        let records =
            vec![pair(5, &[], 100), pair(7, &[], 100), pair(11, &[], 99)];
        let (_, _, v) = combine_bounds(&records).unwrap();
        assert_eq!(v, Verdict::Inconclusive);
    }

    #[test]
    fn cross_characteristic_padding() {
        // N at 5 is 7, N at 7 is 5: gcd with padding gives 35-compatible
        // behavior: p^inf absorbs each other's characteristic.
        let records = vec![pair(5, &[(7, 1)], 7), pair(7, &[(7, 1)], 5)];
        let (m, n, v) = combine_bounds(&records).unwrap();
        assert_eq!(map_value(&m), BigUint::from(7u64));
        // N-tilde = gcd(7 * 5^e, 5 * 7^e) = 35.
        match &n {
            CombinedBound::Integer { value, .. } => assert_eq!(value, "35"),
            _ => panic!(),
        }
        assert_eq!(v, Verdict::Inconclusive);
    }

    #[test]
    fn supernatural_route_agrees_on_factored_instances() {
        use crate::arith::factor_integer;
        let f12 = factor_integer(&BigInt::from(12)).unwrap();
        let f2368 = factor_integer(&BigInt::from(2368)).unwrap();
        let (m, n, divides) = combine_supernatural(
            &[f2368.clone(), f2368.clone()],
            &[(5, f12.clone()), (11, f12.clone())],
        )
        .unwrap();
        assert!(!divides);
        assert_eq!(m.to_display(), "2^6 * 37");
        // gcd(5^inf*12, 11^inf*12) = 12
        assert_eq!(n.to_display(), "2^2 * 3");
        // Exact-integer route gives the same verdict.
        let records = vec![
            pair(5, &[(2, 6), (37, 1)], 12),
            pair(11, &[(2, 6), (37, 1)], 12),
        ];
        let (_, _, v) = combine_bounds(&records).unwrap();
        assert_eq!(v, Verdict::NonTorsionCertified);
    }

    #[test]
    fn certify_roundtrip_and_verify() {
        // Small end-to-end on the pointy curve at two primes.
        let curve = TernaryQuarticZ::parse("x^4 + z^4 - y^3*z").unwrap();
        let cert = certify(
            &curve,
            &PrimeSelection::Explicit(vec![5, 7]),
            BoundMode::FullH3,
            0,
        )
        .unwrap();
        let json = cert.to_json();
        let back = Certificate::from_json(&json).unwrap();
        assert_eq!(cert, back);
        assert!(verify_certificate(&back).unwrap());
        // Tamper with a shadow order: verification fails.
        let mut bad = back.clone();
        bad.prime_records[0].shadow_order = "424242".into();
        assert!(!verify_certificate(&bad).unwrap());
        // Verdict inconsistent with own bounds: fails.
        let mut bad2 = back.clone();
        bad2.verdict = match bad2.verdict {
            Verdict::Inconclusive => Verdict::NonTorsionCertified,
            Verdict::NonTorsionCertified => Verdict::Inconclusive,
        };
        assert!(!verify_certificate(&bad2).unwrap());
    }

    #[test]
    fn deterministic_serialization() {
        let curve = TernaryQuarticZ::parse("x^4 + z^4 - y^3*z").unwrap();
        let c1 = certify(&curve, &PrimeSelection::Explicit(vec![5]), BoundMode::FullH3, 7)
            .unwrap();
        let c2 = certify(&curve, &PrimeSelection::Explicit(vec![5]), BoundMode::FullH3, 7)
            .unwrap();
        assert_eq!(c1.to_json(), c2.to_json());
    }
}
