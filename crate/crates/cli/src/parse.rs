use qalens::slope::Slope;
use qalens::{ConnSum, Error, LensSpace, Rational, Result};

fn bad(what: &'static str, input: &str) -> Error {
    Error::Parse { what, input: input.to_string() }
}

fn int<T: std::str::FromStr>(what: &'static str, s: &str) -> Result<T> {
    s.trim().parse().map_err(|_| bad(what, s))
}

/// `p,q`, or `L(p,q)`.
pub fn lens(s: &str) -> Result<LensSpace> {
    let t = s.trim();
    let inner = t.strip_prefix("L(").and_then(|r| r.strip_suffix(')')).unwrap_or(t);
    if matches!(inner, "S3" | "S^3") {
        return Ok(LensSpace::s3());
    }
    if matches!(inner, "RP3" | "RP^3") {
        return Ok(LensSpace::rp3());
    }
    let (p, q) = inner.split_once(',').ok_or_else(|| bad("lens space", s))?;
    LensSpace::new(int("lens space", p)?, int("lens space", q)?)
}

/// Summands separated by `#`.
pub fn conn_sum(s: &str) -> Result<ConnSum> {
    let parts: Vec<LensSpace> = s.split('#').map(lens).collect::<Result<_>>()?;
    Ok(ConnSum::new(parts))
}

pub fn rational(s: &str) -> Result<Rational> {
    s.parse()
}

/// `a/p` with a positive denominator, returned as `(a, p)`.
pub fn fraction(s: &str) -> Result<(i64, u64)> {
    let (a, p) = s.split_once('/').ok_or_else(|| bad("fraction a/p", s))?;
    let p: u64 = int("fraction a/p", p)?;
    if p == 0 {
        return Err(bad("fraction a/p", s));
    }
    Ok((int("fraction a/p", a)?, p))
}

pub fn slope(s: &str) -> Result<Slope> {
    let (a, b) = s.split_once(',').ok_or_else(|| bad("slope a,b", s))?;
    Slope::new(int("slope a,b", a)?, int("slope a,b", b)?)
}

/// `a/b:target`.
pub fn surgery(s: &str) -> Result<(i64, i64, ConnSum)> {
    let (coef, target) = s.split_once(':').ok_or_else(|| bad("surgery a/b:target", s))?;
    let (a, b) = match coef.split_once('/') {
        Some((a, b)) => (int("surgery coefficient", a)?, int("surgery coefficient", b)?),
        None => (int("surgery coefficient", coef)?, 1),
    };
    Ok((a, b, conn_sum(target)?))
}
