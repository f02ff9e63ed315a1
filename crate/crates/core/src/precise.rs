//! Thin wrapper over `astro-float` for the asymptotic main terms.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

pub use astro_float::BigFloat;
use astro_float::{Consts, Radix, RoundingMode};
use num_bigint::BigInt;

/// 256 bits, about 77 decimal digits.
pub const DEFAULT_PRECISION_BITS: usize = 256;

const RM: RoundingMode = RoundingMode::ToEven;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PreciseError {
    #[error("could not initialise the constants cache")]
    Constants,
    #[error("result is not a finite number")]
    NotFinite,
    #[error("could not format or parse a decimal value")]
    Format,
}

/// Working precision plus the constants cache `astro-float` needs for `pi`,
/// `exp` and `ln`.
pub struct Arith {
    cc: Consts,
    bits: usize,
}

impl core::fmt::Debug for Arith {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Arith").field("bits", &self.bits).finish()
    }
}

impl Arith {
    pub fn new(bits: usize) -> Result<Self, PreciseError> {
        Ok(Self {
            cc: Consts::new().map_err(|_| PreciseError::Constants)?,
            bits: bits.max(64),
        })
    }

    /// Enough bits for `digits` significant decimal digits plus guard bits.
    pub fn with_digits(digits: usize) -> Result<Self, PreciseError> {
        Self::new(digits * 3322 / 1000 + 40)
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    /// Decimal digits the working precision carries.
    pub fn digits(&self) -> usize {
        self.bits * 301 / 1000
    }

    pub fn int(&self, v: i64) -> BigFloat {
        BigFloat::from_i64(v, self.bits)
    }

    pub fn from_f64(&self, v: f64) -> BigFloat {
        BigFloat::from_f64(v, self.bits)
    }

    pub fn from_bigint(&mut self, v: &BigInt) -> BigFloat {
        BigFloat::parse(&v.to_string(), Radix::Dec, self.bits, RM, &mut self.cc)
    }

    pub fn ratio(&self, num: i64, den: i64) -> BigFloat {
        self.int(num).div(&self.int(den), self.bits, RM)
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.bits, RM)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.bits, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.bits, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.bits, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.bits, RM)
    }

    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.bits, RM)
    }

    pub fn exp(&mut self, a: &BigFloat) -> BigFloat {
        a.exp(self.bits, RM, &mut self.cc)
    }

    pub fn ln(&mut self, a: &BigFloat) -> BigFloat {
        a.ln(self.bits, RM, &mut self.cc)
    }

    /// `a^b = exp(b ln a)` for `a > 0`.
    pub fn powf(&mut self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        let l = self.ln(a);
        let e = self.mul(b, &l);
        self.exp(&e)
    }

    pub fn abs(&self, a: &BigFloat) -> BigFloat {
        a.abs()
    }

    /// `|a - b| / |b|`.
    pub fn relative_difference(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        self.div(&self.sub(a, b).abs(), &b.abs())
    }

    pub fn is_finite(a: &BigFloat) -> bool {
        !a.is_nan() && !a.is_inf()
    }

    pub fn to_f64(&mut self, a: &BigFloat) -> Result<f64, PreciseError> {
        if !Self::is_finite(a) {
            return Err(PreciseError::NotFinite);
        }
        let s = a
            .format(Radix::Dec, RM, &mut self.cc)
            .map_err(|_| PreciseError::Format)?;
        s.parse::<f64>().map_err(|_| PreciseError::Format)
    }

    /// Plain positional decimal rounded to `sig` significant digits, without
    /// an exponent and without trailing zeros after the point.
    pub fn to_decimal(&mut self, a: &BigFloat, sig: usize) -> Result<String, PreciseError> {
        if !Self::is_finite(a) {
            return Err(PreciseError::NotFinite);
        }
        let s = a
            .format(Radix::Dec, RM, &mut self.cc)
            .map_err(|_| PreciseError::Format)?;
        scientific_to_plain(&s, sig.max(1)).ok_or(PreciseError::Format)
    }
}

/// Rewrites `-d.ddd e±x` as a plain decimal with `sig` significant digits.
pub fn scientific_to_plain(s: &str, sig: usize) -> Option<String> {
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (mantissa, exponent) = match body.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let mut digits: Vec<u8> = int_part.bytes().chain(frac_part.bytes()).collect();
    if !digits.iter().all(u8::is_ascii_digit) {
        return None;
    }
    // position of the decimal point relative to the start of `digits`
    let mut point = int_part.len() as i64 + exponent;
    let lead = digits.iter().take_while(|&&d| d == b'0').count();
    if lead == digits.len() {
        return Some(String::from("0"));
    }
    digits.drain(..lead);
    point -= lead as i64;
    if digits.len() > sig {
        let round_up = digits[sig] >= b'5';
        digits.truncate(sig);
        if round_up {
            let mut i = sig;
            loop {
                if i == 0 {
                    digits.insert(0, b'1');
                    point += 1;
                    break;
                }
                i -= 1;
                if digits[i] == b'9' {
                    digits[i] = b'0';
                } else {
                    digits[i] += 1;
                    break;
                }
            }
        }
    }
    while digits.len() > 1 && digits.last() == Some(&b'0') && (digits.len() as i64) > point {
        digits.pop();
    }
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if point <= 0 {
        out.push_str("0.");
        for _ in 0..(-point) {
            out.push('0');
        }
        out.extend(digits.iter().map(|&d| d as char));
    } else {
        let p = point as usize;
        for i in 0..p.max(digits.len()) {
            if i == p {
                out.push('.');
            }
            out.push(digits.get(i).map_or('0', |&d| d as char));
        }
    }
    Some(out)
}
