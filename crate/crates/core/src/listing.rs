//! Plain-text amplitude listings.
//!
//! One amplitude per line:
//!
//! ```text
//! <id> <S'|-> <S> <M> | <m1> <m2> [<m3>] | <num> <den> <+|->
//! ```
//!
//! The coefficient is `sign · num/√den`, so every Clebsch–Gordan value has an
//! exact encoding. Lines sharing an id form one listing and must be
//! contiguous. `#` starts a comment; blank lines are ignored.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::{self, Write as _};

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Zero};

use crate::cg::SignedSqrt;
use crate::coupling::QuantumNumbers;
use crate::error::invalid;
use crate::spin::{ProductBasis, SpinSpecies};
use crate::tensor::StateVector;
use crate::{Error, HalfInt, Result, C64};
#[allow(unused_imports)] // inherent f64 methods win when std is in the graph
use num_traits::Float;

/// `±num/√den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Coefficient {
    pub num: u64,
    pub den: u64,
    pub negative: bool,
}

impl Coefficient {
    pub fn new(num: u64, den: u64, negative: bool) -> Result<Self> {
        if den == 0 {
            return Err(invalid!("coefficient denominator must be positive"));
        }
        Ok(Coefficient { num, den, negative })
    }

    pub fn to_f64(self) -> f64 {
        let v = self.num as f64 / (self.den as f64).sqrt();
        if self.negative {
            -v
        } else {
            v
        }
    }

    /// `num²/den`, exact.
    pub fn square(self) -> Result<Ratio<i128>> {
        let n = i128::from(self.num);
        let sq = n
            .checked_mul(n)
            .ok_or(Error::Overflow("coefficient square"))?;
        Ok(Ratio::new(sq, i128::from(self.den)))
    }

    /// `+num/sqrt(den)`, or a plain fraction when `den` is a perfect square.
    pub fn radical_text(self) -> String {
        let sign = if self.negative { '-' } else { '+' };
        let root = self.den.isqrt();
        if root * root != self.den {
            return alloc::format!("{sign}{}/sqrt({})", self.num, self.den);
        }
        let mut g = (self.num, root);
        while g.1 != 0 {
            g = (g.1, g.0 % g.1);
        }
        let g = g.0.max(1);
        match root / g {
            1 => alloc::format!("{sign}{}", self.num / g),
            r => alloc::format!("{sign}{}/{r}", self.num / g),
        }
    }

    pub fn to_signed_sqrt(self) -> Result<SignedSqrt> {
        let sq = self.square()?;
        SignedSqrt::new(self.negative, *sq.numer(), *sq.denom())
    }

    pub fn from_signed_sqrt(value: &SignedSqrt) -> Result<Self> {
        let (num, den, negative) = value.radical_form()?;
        Coefficient::new(num, den, negative)
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {}",
            self.num,
            self.den,
            if self.negative { '-' } else { '+' }
        )
    }
}

/// One product-basis term `coefficient · |m1 m2 …⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ListingTerm {
    pub ms: Vec<HalfInt>,
    pub coefficient: Coefficient,
}

impl ListingTerm {
    pub fn total_m(&self) -> HalfInt {
        self.ms.iter().fold(HalfInt::ZERO, |a, &m| a + m)
    }
}

/// A named state written out term by term, exactly as transcribed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Listing {
    pub id: String,
    pub numbers: QuantumNumbers,
    pub terms: Vec<ListingTerm>,
}

impl Listing {
    pub fn particles(&self) -> usize {
        self.terms.first().map_or(0, |t| t.ms.len())
    }

    /// `Σ|amplitude|²`, exact. Repeated kets are combined first; that needs
    /// each cross term `2·cᵢ·cⱼ` to be rational.
    pub fn norm_squared(&self) -> Result<Ratio<i128>> {
        let overflow = || Error::Overflow("listing norm");
        let mut total = Ratio::zero();
        for (k, t) in self.terms.iter().enumerate() {
            total = total
                .checked_add(&t.coefficient.square()?)
                .ok_or_else(overflow)?;
            for u in self.terms[..k].iter().filter(|u| u.ms == t.ms) {
                let cross = t
                    .coefficient
                    .square()?
                    .checked_mul(&u.coefficient.square()?)
                    .ok_or_else(overflow)?;
                let root = rational_sqrt(cross).ok_or_else(|| {
                    invalid!(
                        "listing {}: repeated ket {:?} with incommensurate radicals",
                        self.id,
                        t.ms
                    )
                })?;
                let twice = root * Ratio::from_integer(2);
                total = if t.coefficient.negative == u.coefficient.negative {
                    total.checked_add(&twice)
                } else {
                    total.checked_sub(&twice)
                }
                .ok_or_else(overflow)?;
            }
        }
        Ok(total)
    }

    pub fn is_normalized(&self) -> Result<bool> {
        Ok(self.norm_squared()? == Ratio::one())
    }

    /// Indices of terms whose `Σm` differs from the listing's `M`.
    pub fn wrong_m_terms(&self) -> Vec<usize> {
        (0..self.terms.len())
            .filter(|&k| self.terms[k].total_m() != self.numbers.m_total)
            .collect()
    }

    /// Raw amplitude vector over the product basis of `system`, without
    /// normalizing.
    pub fn amplitudes(&self, system: &[SpinSpecies]) -> Result<Vec<C64>> {
        let basis = ProductBasis::new(system)?;
        let mut amps = alloc::vec![C64::new(0.0, 0.0); basis.dim()];
        for t in &self.terms {
            let index = basis
                .index_of(&t.ms)
                .map_err(|e| invalid!("listing {}: {e}", self.id))?;
            amps[index] += C64::new(t.coefficient.to_f64(), 0.0);
        }
        Ok(amps)
    }

    /// The listed state rescaled to unit norm.
    pub fn state(&self, system: &[SpinSpecies]) -> Result<StateVector> {
        let dims = system.iter().map(|s| s.dim()).collect();
        StateVector::normalized(dims, self.amplitudes(system)?)
    }

    /// Builds a listing from exact amplitudes over the product basis of
    /// `system`, skipping zeros.
    pub fn from_exact(
        id: &str,
        numbers: QuantumNumbers,
        system: &[SpinSpecies],
        exact: &[SignedSqrt],
    ) -> Result<Listing> {
        let basis = ProductBasis::new(system)?;
        if exact.len() != basis.dim() {
            return Err(invalid!(
                "{} amplitudes for a {}-dimensional basis",
                exact.len(),
                basis.dim()
            ));
        }
        let terms = exact
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                Ok(ListingTerm {
                    ms: basis.labels(i),
                    coefficient: Coefficient::from_signed_sqrt(c)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Listing {
            id: id.to_string(),
            numbers,
            terms,
        })
    }
}

impl fmt::Display for Listing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = self.numbers;
        let sp = q
            .s_intermediate
            .map_or_else(|| "-".to_string(), |s| s.to_string());
        for t in &self.terms {
            write!(f, "{} {} {} {} |", self.id, sp, q.s_total, q.m_total)?;
            for m in &t.ms {
                write!(f, " {m}")?;
            }
            writeln!(f, " | {}", t.coefficient)?;
        }
        Ok(())
    }
}

/// Writes listings in file format, one block per listing.
pub fn format_listings(listings: &[Listing]) -> String {
    let mut out = String::new();
    for l in listings {
        let _ = write!(out, "{l}");
    }
    out
}

fn rational_sqrt(r: Ratio<i128>) -> Option<Ratio<i128>> {
    let isqrt = |n: i128| -> Option<i128> {
        let s = (n as f64).sqrt().round() as i128;
        (s - 1..=s + 1).find(|c| *c >= 0 && c * c == n)
    };
    Some(Ratio::new(isqrt(*r.numer())?, isqrt(*r.denom())?))
}

fn parse_line(line: &str) -> core::result::Result<(String, QuantumNumbers, ListingTerm), String> {
    let fields: Vec<&str> = line.split('|').map(str::trim).collect();
    let [head, kets, coeff] = fields.as_slice() else {
        return Err("expected three '|'-separated fields".to_string());
    };
    let head: Vec<&str> = head.split_whitespace().collect();
    let [id, sp, s, m] = head.as_slice() else {
        return Err("label field must be '<id> <S'|-> <S> <M>'".to_string());
    };
    let half = |t: &str| t.parse::<HalfInt>().map_err(|e| e.to_string());
    let s_intermediate = match *sp {
        "-" => None,
        other => Some(half(other)?),
    };
    let numbers = QuantumNumbers {
        s_intermediate,
        s_total: half(s)?,
        m_total: half(m)?,
    };
    let ms = kets
        .split_whitespace()
        .map(half)
        .collect::<core::result::Result<Vec<_>, _>>()?;
    if !(2..=3).contains(&ms.len()) {
        return Err(alloc::format!(
            "expected 2 or 3 magnetic numbers, got {}",
            ms.len()
        ));
    }
    let coeff: Vec<&str> = coeff.split_whitespace().collect();
    let [num, den, sign] = coeff.as_slice() else {
        return Err("coefficient field must be '<num> <den> <+|->'".to_string());
    };
    let num: u64 = num
        .parse()
        .map_err(|_| alloc::format!("bad numerator '{num}'"))?;
    let den: u64 = den
        .parse()
        .map_err(|_| alloc::format!("bad denominator '{den}'"))?;
    let negative = match *sign {
        "+" => false,
        "-" => true,
        other => return Err(alloc::format!("sign must be '+' or '-', got '{other}'")),
    };
    let coefficient = Coefficient::new(num, den, negative).map_err(|e| e.to_string())?;
    Ok((id.to_string(), numbers, ListingTerm { ms, coefficient }))
}

/// Parses a listing file. Errors carry 1-based line numbers.
pub fn parse_listings(text: &str) -> Result<Vec<Listing>> {
    let mut out: Vec<Listing> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let (id, numbers, term) = parse_line(line).map_err(err)?;
        match out.last_mut() {
            Some(cur) if cur.id == id => {
                if cur.numbers != numbers {
                    return Err(err(alloc::format!(
                        "quantum numbers change within listing {id}"
                    )));
                }
                if cur.particles() != term.ms.len() {
                    return Err(err(alloc::format!(
                        "particle count changes within listing {id}"
                    )));
                }
                cur.terms.push(term);
            }
            _ => {
                if out.iter().any(|l| l.id == id) {
                    return Err(err(alloc::format!(
                        "listing {id} is split into non-contiguous blocks"
                    )));
                }
                out.push(Listing {
                    id,
                    numbers,
                    terms: alloc::vec![term],
                });
            }
        }
    }
    Ok(out)
}
