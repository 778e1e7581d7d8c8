use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive};

use super::GeomError;

/// Exact rational scalar. `Ratio` keeps the denominator positive and the
/// fraction reduced after every operation.
pub type Rat = Ratio<i128>;

pub fn rat(n: i128, d: i128) -> Rat {
    Rat::new(n, d)
}

pub fn int(n: i128) -> Rat {
    Rat::from_integer(n)
}

pub fn to_f64(r: &Rat) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

/// Formats as `p/q`, or `p` for integers.
pub fn fmt_rat(r: &Rat) -> String {
    r.to_string()
}

pub fn parse_rat(s: &str) -> Result<Rat, GeomError> {
    let bad = || GeomError::Parse(s.to_string());
    let t = s.trim();
    match t.split_once('/') {
        Some((p, q)) => {
            let p: i128 = p.trim().parse().map_err(|_| bad())?;
            let q: i128 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rat::new(p, q))
        }
        None => {
            if let Some((ip, fp)) = t.split_once('.') {
                // finite decimals are exact rationals
                let neg = ip.starts_with('-');
                let ip_abs: i128 = ip.trim_start_matches('-').parse().unwrap_or(0);
                if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) || fp.len() > 30 {
                    return Err(bad());
                }
                let scale = 10i128.pow(fp.len() as u32);
                let f: i128 = fp.parse().map_err(|_| bad())?;
                let v = Rat::new(ip_abs * scale + f, scale);
                return Ok(if neg { -v } else { v });
            }
            Ok(int(t.parse().map_err(|_| bad())?))
        }
    }
}

/// Largest rational `p/den` with `(p/den)^2 <= x`, for `x >= 0`.
pub fn sqrt_floor(x: &Rat, den: i128) -> Rat {
    assert!(!x.is_negative(), "sqrt of a negative rational");
    let mut p = (to_f64(x).sqrt() * den as f64).floor() as i128;
    let sq = |p: i128| Rat::new(p * p, den * den);
    while p > 0 && sq(p) > *x {
        p -= 1;
    }
    while sq(p + 1) <= *x {
        p += 1;
    }
    Rat::new(p, den)
}

/// Exact square root when `x` is the square of a rational.
pub fn sqrt_exact(x: &Rat) -> Option<Rat> {
    if x.is_negative() {
        return None;
    }
    let isqrt = |n: i128| -> Option<i128> {
        let mut r = (n as f64).sqrt() as i128;
        while r * r > n {
            r -= 1;
        }
        while (r + 1) * (r + 1) <= n {
            r += 1;
        }
        (r * r == n).then_some(r)
    };
    Some(Rat::new(isqrt(*x.numer())?, isqrt(*x.denom())?))
}

/// Rational bounds on pi used wherever a disc area has to be compared
/// exactly: `PI_LO < pi < PI_HI`.
pub fn pi_lo() -> Rat {
    rat(333, 106)
}

pub fn pi_hi() -> Rat {
    rat(355, 113)
}

pub fn lcm_denoms<'a>(vals: impl IntoIterator<Item = &'a Rat>) -> i128 {
    vals.into_iter().fold(1i128, |acc, r| acc.lcm(r.denom()))
}

pub mod serde_rat {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_rat_vec {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&fmt_rat(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rat(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

pub mod serde_rat_opt {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Rat>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&fmt_rat(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rat>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        s.map(|s| parse_rat(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}
