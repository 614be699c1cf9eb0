//! A perfect code over `Z_p` correcting one error of limited magnitude.
//!
//! With splitter set `S = (s_1, ..., s_n)` of `M = [-k1, k2]*`, codewords are
//! the words with `sum s_i w_i = 0 (mod p)`. Adding `m in M` to symbol `i`
//! shifts the syndrome by `m * s_i`, and the splitting makes that product
//! identify `(i, m)` uniquely. The last position carries the check symbol.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::splitting::{MultiplierSet, SplittingCertificate};
use crate::zmod::{inv_mod, is_prime, mul_mod, reduce};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSpec {
    certificate: SplittingCertificate,
    /// Splitter order used for positions.
    positions: Vec<u64>,
    /// `locator[m * s_i mod p] = (i, m)`.
    locator: Vec<Option<(usize, i64)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    pub symbols: Vec<u64>,
}

impl Word {
    pub fn new(symbols: Vec<u64>) -> Self {
        Word { symbols }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// A located error: `magnitude` was added to the symbol at `position`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Correction {
    pub position: usize,
    pub magnitude: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decoded {
    pub word: Word,
    pub correction: Option<Correction>,
}

impl CodeSpec {
    /// Positions follow the certificate's (sorted) splitter order.
    pub fn from_certificate(certificate: SplittingCertificate) -> Result<Self> {
        let positions = certificate.splitters().to_vec();
        Self::with_order(certificate, positions)
    }

    /// `positions` must be a permutation of the certificate's splitters.
    pub fn with_order(certificate: SplittingCertificate, positions: Vec<u64>) -> Result<Self> {
        let p = certificate.modulus();
        if !is_prime(p) {
            return Err(Error::not_prime(p));
        }
        if certificate.multipliers().interval_form().is_none() {
            return Err(Error::InvalidMultipliers(format!(
                "{} is not of the form [-k1, k2]*",
                certificate.multipliers()
            )));
        }
        let mut sorted = positions.clone();
        sorted.sort_unstable();
        if sorted != certificate.splitters() {
            return Err(Error::domain("positions must reorder the certificate's splitters"));
        }
        let mut locator = vec![None; p as usize];
        for (i, &s) in positions.iter().enumerate() {
            for &m in certificate.multipliers().elements() {
                locator[mul_mod(reduce(m, p), s, p) as usize] = Some((i, m));
            }
        }
        Ok(CodeSpec {
            certificate,
            positions,
            locator,
        })
    }

    pub fn new(p: u64, multipliers: MultiplierSet, positions: Vec<u64>) -> Result<Self> {
        let certificate = SplittingCertificate::new(multipliers, positions.clone(), p)?;
        Self::with_order(certificate, positions)
    }

    pub fn prime(&self) -> u64 {
        self.certificate.modulus()
    }

    pub fn length(&self) -> usize {
        self.positions.len()
    }

    pub fn positions(&self) -> &[u64] {
        &self.positions
    }

    pub fn certificate(&self) -> &SplittingCertificate {
        &self.certificate
    }

    fn check_length(&self, len: usize) -> Result<()> {
        if len != self.length() {
            return Err(Error::LengthMismatch {
                expected: self.length(),
                actual: len,
            });
        }
        Ok(())
    }
}

/// `sum s_i w_i mod p`.
pub fn syndrome(spec: &CodeSpec, w: &Word) -> Result<u64> {
    spec.check_length(w.len())?;
    let p = spec.prime();
    Ok(spec
        .positions
        .iter()
        .zip(&w.symbols)
        .fold(0, |acc, (&s, &x)| (acc + mul_mod(s, x % p, p)) % p))
}

/// Appends the check symbol that zeroes the syndrome.
pub fn encode(spec: &CodeSpec, message: &[u64]) -> Result<Word> {
    let n = spec.length();
    if message.len() + 1 != n {
        return Err(Error::LengthMismatch {
            expected: n - 1,
            actual: message.len(),
        });
    }
    let p = spec.prime();
    let partial = spec
        .positions
        .iter()
        .zip(message)
        .fold(0, |acc, (&s, &x)| (acc + mul_mod(s, x % p, p)) % p);
    let last_inv = inv_mod(spec.positions[n - 1], p).expect("splitters are units mod a prime");
    let check = mul_mod((p - partial) % p, last_inv, p);
    let mut symbols: Vec<u64> = message.iter().map(|&x| x % p).collect();
    symbols.push(check);
    Ok(Word { symbols })
}

/// Corrects at most one error of magnitude in `M`.
pub fn decode(spec: &CodeSpec, received: &Word) -> Result<Decoded> {
    let sigma = syndrome(spec, received)?;
    if sigma == 0 {
        return Ok(Decoded {
            word: received.clone(),
            correction: None,
        });
    }
    let (position, magnitude) = spec.locator[sigma as usize].ok_or(Error::Uncorrectable(sigma))?;
    let p = spec.prime();
    let mut word = received.clone();
    let x = &mut word.symbols[position];
    *x = (*x % p + p - reduce(magnitude, p)) % p;
    Ok(Decoded {
        word,
        correction: Some(Correction {
            position,
            magnitude,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ms(s: &str) -> MultiplierSet {
        s.parse().unwrap()
    }

    #[test]
    fn syndrome_examples() {
        let spec = CodeSpec::new(5, ms("-2..2"), vec![1]).unwrap();
        assert_eq!(syndrome(&spec, &Word::new(vec![3])).unwrap(), 3);
        assert_eq!(syndrome(&spec, &Word::new(vec![0])).unwrap(), 0);
        assert!(syndrome(&spec, &Word::new(vec![0, 0])).is_err());
    }

    #[test]
    fn encode_examples() {
        let spec = CodeSpec::new(7, ms("-1..5"), vec![1]).unwrap();
        assert_eq!(encode(&spec, &[]).unwrap().symbols, vec![0]);
        let spec = CodeSpec::new(7, ms("1..3"), vec![1, 6]).unwrap();
        assert_eq!(encode(&spec, &[0]).unwrap().symbols, vec![0, 0]);
        let w = encode(&spec, &[4]).unwrap();
        assert_eq!(syndrome(&spec, &w).unwrap(), 0);
        assert!(encode(&spec, &[1, 2]).is_err());
    }

    #[test]
    fn corrects_every_single_error() {
        let spec = CodeSpec::new(7, ms("1..3"), vec![6, 1]).unwrap();
        for msg in 0..7 {
            let w = encode(&spec, &[msg]).unwrap();
            assert_eq!(decode(&spec, &w).unwrap().correction, None);
            for position in 0..2 {
                for m in 1..=3i64 {
                    let mut r = w.clone();
                    r.symbols[position] = (r.symbols[position] + m as u64) % 7;
                    let d = decode(&spec, &r).unwrap();
                    assert_eq!(d.word, w);
                    assert_eq!(d.correction, Some(Correction { position, magnitude: m }));
                }
            }
        }
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(CodeSpec::new(7, ms("1..2"), vec![1, 2]).is_err());
        let cert = SplittingCertificate::new(ms("1..3"), vec![1, 6], 7).unwrap();
        assert!(CodeSpec::with_order(cert.clone(), vec![1, 2]).is_err());
        // {1, 3} splits Z_7 but is no interval
        let gappy = SplittingCertificate::new(ms("1,3"), vec![1, 2, 4], 7).unwrap();
        assert!(CodeSpec::from_certificate(gappy).is_err());
    }
}
