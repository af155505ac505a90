//! Unit certificate files.
//!
//! A certificate is a JSON document
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "q": 7,
//!   "m": 1,
//!   "pi": "1/2 + 1/2*a^2",
//!   "gamma": "1 + a",
//!   "eta": "...",
//!   "basis": "OK[alpha]"
//! }
//! ```
//!
//! With `"basis": "OK[alpha]"` every element is written in the canonical power-basis form
//! `c0 + c1*a + c2*a^2 + c3*a^3` with `a⁴ = −q` and exact rational coefficients. Instead,
//! `basis` may be a 4×4 matrix of rational strings whose rows are basis vectors in the
//! power basis; elements are then arrays of four rational coordinates in that basis.
//!
//! `gamma` is optional; without it the unit's odd-power provenance is unknown. `pi` and
//! `m` are optional as well and are recomputed from the class group when absent.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::v2_big;
use crate::classgroup::{generator_of_p_power, odd_generator_exponent};
use crate::error::{Error, Result};
use crate::field::{check_q, format_power_basis, parse_power_basis, FElement, KElement, QuarticField};
use crate::units::{check_certificate, Provenance, UnitCertificate};

pub const SCHEMA_VERSION: u32 = 1;
pub const BASIS_OK_ALPHA: &str = "OK[alpha]";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum ElementRepr {
    Text(String),
    Coords(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum BasisRepr {
    Named(String),
    Matrix(Vec<Vec<String>>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateFile {
    schema_version: u32,
    q: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pi: Option<ElementRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gamma: Option<ElementRepr>,
    eta: ElementRepr,
    basis: BasisRepr,
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    BigRational::from_str(t).map_err(|_| schema(format!("not a rational number: {s:?}")))
}

enum Basis {
    PowerBasis,
    Rows(Box<[[BigRational; 4]; 4]>),
}

impl Basis {
    fn parse(b: &BasisRepr) -> Result<Self> {
        match b {
            BasisRepr::Named(n) if n == BASIS_OK_ALPHA => Ok(Basis::PowerBasis),
            BasisRepr::Named(n) => Err(schema(format!("unknown basis {n:?}"))),
            BasisRepr::Matrix(rows) => {
                if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
                    return Err(schema("basis matrix must be 4x4"));
                }
                let mut m: [[BigRational; 4]; 4] = Default::default();
                for (i, r) in rows.iter().enumerate() {
                    for (j, x) in r.iter().enumerate() {
                        m[i][j] = parse_rational(x)?;
                    }
                }
                let mat: Vec<Vec<BigRational>> = m.iter().map(|r| r.to_vec()).collect();
                if crate::field::linalg::det(&mat).is_zero() {
                    return Err(schema("basis matrix is singular"));
                }
                Ok(Basis::Rows(Box::new(m)))
            }
        }
    }

    fn element(&self, q: u64, e: &ElementRepr, name: &str) -> Result<FElement> {
        match (self, e) {
            (Basis::PowerBasis, ElementRepr::Text(s)) => {
                parse_power_basis(s).map(|c| FElement::new(q, c)).map_err(|err| schema(format!("{name}: {err}")))
            }
            (Basis::Rows(m), ElementRepr::Coords(c)) => {
                if c.len() != 4 {
                    return Err(schema(format!("{name}: expected 4 coordinates")));
                }
                let mut out: [BigRational; 4] = Default::default();
                for (i, x) in c.iter().enumerate() {
                    let x = parse_rational(x)?;
                    for j in 0..4 {
                        out[j] += &x * &m[i][j];
                    }
                }
                Ok(FElement::new(q, out))
            }
            (Basis::PowerBasis, ElementRepr::Coords(_)) => {
                Err(schema(format!("{name}: coordinate arrays need an explicit basis matrix")))
            }
            (Basis::Rows(_), ElementRepr::Text(_)) => {
                Err(schema(format!("{name}: with an explicit basis, elements are coordinate arrays")))
            }
        }
    }
}

/// Parses a certificate document. Malformed documents give `Parse`; documents that parse
/// but whose identities fail give `NotAUnit` naming the identity.
pub fn import_certificate(text: &str) -> Result<UnitCertificate> {
    let file: CertificateFile = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
    if file.schema_version != SCHEMA_VERSION {
        return Err(schema(format!("unsupported schema_version {}", file.schema_version)));
    }
    check_q(file.q).map_err(|e| schema(e.to_string()))?;
    let q = file.q;
    let basis = Basis::parse(&file.basis)?;
    let eta = basis.element(q, &file.eta, "eta")?;
    let gamma = file.gamma.as_ref().map(|g| basis.element(q, g, "gamma")).transpose()?;
    let (m, pi) = match &file.pi {
        Some(p) => {
            let pi_f = basis.element(q, p, "pi")?;
            let pi = pi_f.as_k().ok_or_else(|| Error::NotAUnit(format!("q = {q}: pi lies in K does not hold")))?;
            let m = match file.m {
                Some(m) => m,
                None => m_from_norm(q, &pi)?,
            };
            (m, pi)
        }
        None => {
            let m = odd_generator_exponent(q)?;
            if file.m.is_some_and(|given| given != m) {
                return Err(Error::NotAUnit(format!("q = {q}: m is the order of [p] does not hold")));
            }
            (m, generator_of_p_power(q, m)?)
        }
    };
    let field = QuarticField::new(q)?;
    let mut cert = UnitCertificate {
        q,
        m,
        pi,
        parity_verified: gamma.is_some(),
        gamma,
        eta,
        sign_of_norm: None,
        provenance: Provenance::Imported,
    };
    if let Some(g) = &cert.gamma {
        cert.sign_of_norm = Some(if g.norm_rel() == cert.pi { 1 } else { -1 });
    }
    check_certificate(&field, &cert)?;
    Ok(cert)
}

fn m_from_norm(q: u64, pi: &KElement) -> Result<u32> {
    let n = pi.norm();
    let fail = || Error::NotAUnit(format!("q = {q}: N(pi) is a power of 2 does not hold"));
    if !n.is_integer() || n <= BigRational::zero() {
        return Err(fail());
    }
    let v = v2_big(n.numer()).ok_or_else(fail)?;
    if BigInt::one() << v as usize != *n.numer() {
        return Err(fail());
    }
    let v = v as u32;
    Ok(if q % 8 == 3 { v / 2 } else { v })
}

/// Serializes a certificate in the power-basis form.
pub fn export_certificate(cert: &UnitCertificate) -> String {
    let file = CertificateFile {
        schema_version: SCHEMA_VERSION,
        q: cert.q,
        m: Some(cert.m),
        pi: Some(ElementRepr::Text(format_power_basis(cert.pi.to_f().coords()))),
        gamma: cert.gamma.as_ref().map(|g| ElementRepr::Text(format_power_basis(g.coords()))),
        eta: ElementRepr::Text(format_power_basis(cert.eta.coords())),
        basis: BasisRepr::Named(BASIS_OK_ALPHA.into()),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("certificate serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_documents() {
        assert!(matches!(import_certificate("{"), Err(Error::Parse(_))));
        assert!(matches!(import_certificate(r#"{"schema_version":1,"q":7}"#), Err(Error::Parse(_))));
        let wrong_version = r#"{"schema_version":9,"q":7,"eta":"1","basis":"OK[alpha]"}"#;
        assert!(matches!(import_certificate(wrong_version), Err(Error::Parse(_))));
        let bad_q = r#"{"schema_version":1,"q":5,"eta":"1","basis":"OK[alpha]"}"#;
        assert!(matches!(import_certificate(bad_q), Err(Error::Parse(_))));
        let bad_basis = r#"{"schema_version":1,"q":7,"eta":"1","basis":"Z[i]"}"#;
        assert!(matches!(import_certificate(bad_basis), Err(Error::Parse(_))));
    }

    #[test]
    fn torsion_is_not_accepted_as_fundamental() {
        // η = 1 satisfies the norm identity but γ² = π fails for γ = 1
        let doc = r#"{"schema_version":1,"q":7,"m":1,"pi":"1/2 + 1/2*a^2","gamma":"1","eta":"1","basis":"OK[alpha]"}"#;
        match import_certificate(doc) {
            Err(Error::NotAUnit(msg)) => assert!(msg.contains("norm_rel(gamma)"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn explicit_basis_matrix() {
        // basis {1, a, a^2, a^3} written out explicitly; eta = 1 - a is not of norm 1
        let doc = r#"{"schema_version":1,"q":7,"eta":["1","-1","0","0"],
            "basis":[["1","0","0","0"],["0","1","0","0"],["0","0","1","0"],["0","0","0","1"]]}"#;
        match import_certificate(doc) {
            Err(Error::NotAUnit(msg)) => assert!(msg.contains("norm_rel(eta)"), "{msg}"),
            other => panic!("{other:?}"),
        }
        let singular = r#"{"schema_version":1,"q":7,"eta":["1","0","0","0"],
            "basis":[["1","0","0","0"],["1","0","0","0"],["0","0","1","0"],["0","0","0","1"]]}"#;
        assert!(matches!(import_certificate(singular), Err(Error::Parse(_))));
    }
}
