//! Exact exponential generating functions: univariate power series over the
//! rationals, truncated at a fixed order, with composition, exponential,
//! logarithm and compositional inversion (Lagrange–Bürmann, cross-checked by
//! Newton iteration).
//!
//! A series of order `N` stores the coefficients of `t^0 .. t^N` exactly.
//! The dims view of an EGF `f = sum c_n t^n` is the sequence `n! * c_n`,
//! `n = 1..N` — the per-arity dimensions counted by `f`.

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};
use num::bigint::BigInt;
use num::{One, Signed, Zero};

pub const DEFAULT_ORDER: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Egf {
    /// Coefficient of `t^k` at index `k`; length `order + 1`.
    coeffs: Vec<Scalar>,
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

impl Egf {
    pub fn zero(order: usize) -> Self {
        Egf {
            coeffs: vec![Scalar::zero(); order + 1],
        }
    }

    /// The identity series `t`.
    pub fn t(order: usize) -> Self {
        let mut s = Egf::zero(order);
        if order >= 1 {
            s.coeffs[1] = Scalar::one();
        }
        s
    }

    pub fn constant(c: Scalar, order: usize) -> Self {
        let mut s = Egf::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn from_coeffs(coeffs: Vec<Scalar>) -> Self {
        assert!(!coeffs.is_empty(), "a series has at least the t^0 slot");
        Egf { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &Scalar {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    fn check_order(&self, other: &Egf) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::Series(format!(
                "order mismatch: {} vs {}",
                self.order(),
                other.order()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Egf) -> Result<Egf> {
        self.check_order(other)?;
        Ok(Egf {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Egf) -> Result<Egf> {
        self.check_order(other)?;
        Ok(Egf {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn neg(&self) -> Egf {
        Egf {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Egf {
        Egf {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Egf) -> Result<Egf> {
        self.check_order(other)?;
        let n = self.order();
        let mut out = Egf::zero(n);
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(n - i) {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                let prod = &self.coeffs[i] * &other.coeffs[j];
                out.coeffs[i + j] += prod;
            }
        }
        Ok(out)
    }

    /// Substitutes `inner` for `t`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Egf) -> Result<Egf> {
        self.check_order(inner)?;
        if !inner.coeffs[0].is_zero() {
            return Err(Error::Series(
                "composition needs a zero constant term in the inner series".to_string(),
            ));
        }
        // Horner: c_0 + inner * (c_1 + inner * (c_2 + ...))
        let n = self.order();
        let mut out = Egf::constant(self.coeffs[n].clone(), n);
        for k in (0..n).rev() {
            out = out.mul(inner)?;
            out.coeffs[0] += &self.coeffs[k];
        }
        Ok(out)
    }

    /// Derivative with respect to `t` (the top coefficient is lost to the
    /// truncation; the result keeps the same order with a zero top slot).
    pub fn derivative(&self) -> Egf {
        let n = self.order();
        let mut out = Egf::zero(n);
        for k in 1..=n {
            out.coeffs[k - 1] = &self.coeffs[k] * &scalar::int(k as i64);
        }
        out
    }

    /// `exp(self)`; requires a zero constant term.
    pub fn exp(&self) -> Result<Egf> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Series(
                "exp needs a zero constant term".to_string(),
            ));
        }
        let n = self.order();
        let mut out = Egf::constant(Scalar::one(), n);
        let mut power = Egf::constant(Scalar::one(), n);
        let mut kfact = BigInt::one();
        for k in 1..=n {
            power = power.mul(self)?;
            kfact *= BigInt::from(k);
            let inv = Scalar::new(BigInt::one(), kfact.clone());
            out = out.add(&power.scale(&inv))?;
        }
        Ok(out)
    }

    /// `log(1 + self)`; requires a zero constant term.
    pub fn log1p(&self) -> Result<Egf> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Series(
                "log1p needs a zero constant term".to_string(),
            ));
        }
        let n = self.order();
        let mut out = Egf::zero(n);
        let mut power = Egf::constant(Scalar::one(), n);
        for k in 1..=n {
            power = power.mul(self)?;
            let sign = if k % 2 == 1 { 1 } else { -1 };
            let c = scalar::ratio(sign, k as i64);
            out = out.add(&power.scale(&c))?;
        }
        Ok(out)
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn recip(&self) -> Result<Egf> {
        if self.coeffs[0].is_zero() {
            return Err(Error::Series(
                "reciprocal needs a nonzero constant term".to_string(),
            ));
        }
        let n = self.order();
        let mut out = Egf::zero(n);
        out.coeffs[0] = Scalar::one() / &self.coeffs[0];
        for k in 1..=n {
            let mut acc = Scalar::zero();
            for j in 1..=k {
                acc += &self.coeffs[j] * &out.coeffs[k - j];
            }
            out.coeffs[k] = -acc / &self.coeffs[0];
        }
        Ok(out)
    }

    /// Compositional inverse by Lagrange–Bürmann, cross-checked against a
    /// Newton iteration; requires zero constant term and invertible linear
    /// term.
    pub fn comp_inverse(&self) -> Result<Egf> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Series(
                "compositional inverse needs a zero constant term".to_string(),
            ));
        }
        if self.coeffs[1].is_zero() {
            return Err(Error::Series(
                "compositional inverse needs an invertible linear term".to_string(),
            ));
        }
        let n = self.order();
        // h = t / self, a unit series: h_k = c_{k+1}.
        let mut h = Egf::zero(n);
        for k in 0..n {
            h.coeffs[k] = self.coeffs[k + 1].clone();
        }
        h = h.recip()?;
        // [t^m] g = (1/m) [t^{m-1}] h^m
        let mut lagrange = Egf::zero(n);
        let mut h_pow = Egf::constant(Scalar::one(), n);
        for m in 1..=n {
            h_pow = h_pow.mul(&h)?;
            lagrange.coeffs[m] = &h_pow.coeffs[m - 1] * &scalar::ratio(1, m as i64);
        }

        // Newton: g <- g - (self(g) - t) / self'(g)
        let t = Egf::t(n);
        let mut newton = t.scale(&(Scalar::one() / &self.coeffs[1]));
        let d = self.derivative();
        loop {
            let residual = self.compose(&newton)?.sub(&t)?;
            if residual.is_zero() {
                break;
            }
            let step = residual.mul(&d.compose(&newton)?.recip()?)?;
            newton = newton.sub(&step)?;
        }

        if lagrange != newton {
            return Err(Error::Series(
                "inversion mismatch between Lagrange and Newton".to_string(),
            ));
        }
        Ok(lagrange)
    }

    /// The dims view `n! * c_n` for `n = 1..=order`, as exact rationals.
    pub fn dims_view(&self) -> Vec<Scalar> {
        (1..=self.order())
            .map(|k| &self.coeffs[k] * &Scalar::from_integer(factorial(k)))
            .collect()
    }

    /// The dims view as nonnegative integers; errors when a value is
    /// fractional or negative.
    pub fn dims_view_u64(&self) -> Result<Vec<u64>> {
        self.dims_view()
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                if !v.is_integer() || v.is_negative() {
                    return Err(Error::Series(format!(
                        "dims view entry {} is {}, not a nonnegative integer",
                        i + 1,
                        v
                    )));
                }
                v.to_integer()
                    .try_into()
                    .map_err(|_| Error::Series(format!("dims view entry {} overflows u64", i + 1)))
            })
            .collect()
    }

    /// Rows `(k, "p/q")` of all coefficients, constant term first.
    pub fn coefficient_rows(&self) -> Vec<(usize, String)> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| (k, scalar::format_scalar(c)))
            .collect()
    }
}

/// The rooted-tree EGF: the unique solution of `f = t * exp(f)` with zero
/// constant term.  Its dims view is `n^(n-1)`.
pub fn tree_egf(order: usize) -> Egf {
    let t = Egf::t(order);
    let mut f = Egf::zero(order);
    // One iteration fixes one further coefficient; `order` passes suffice.
    for _ in 0..=order {
        f = t.mul(&f.exp().expect("zero constant term")).expect("same order");
    }
    debug_assert_eq!(
        f,
        t.mul(&f.exp().unwrap()).unwrap(),
        "tree EGF iteration must reach its fixed point"
    );
    f
}

/// `t * exp(-t)`: the EGF whose compositional inverse is the rooted-tree
/// series.
pub fn t_exp_neg_t(order: usize) -> Egf {
    let t = Egf::t(order);
    t.mul(&t.neg().exp().expect("zero constant term"))
        .expect("same order")
}

/// The three Euler-characteristic series and their closed forms:
/// `-log(1+t) + t`, `exp(-t) - 1 + t`, and `1 + log(1+t) - t - (1+t)exp(-t)`.
pub fn euler_presets(order: usize) -> Vec<(&'static str, Egf)> {
    let t = Egf::t(order);
    let one = Egf::constant(Scalar::one(), order);
    let log_1pt = t.log1p().expect("zero constant term");
    let exp_neg_t = t.neg().exp().expect("zero constant term");
    let first = log_1pt.neg().add(&t).expect("same order");
    let second = exp_neg_t.sub(&one).expect("same order").add(&t).expect("same order");
    let third = one
        .add(&log_1pt)
        .and_then(|s| s.sub(&t))
        .and_then(|s| s.sub(&one.add(&t).expect("same order").mul(&exp_neg_t)?))
        .expect("same order");
    vec![
        ("com-euler", first),
        ("lie-euler", second),
        ("composite-euler", third),
    ]
}

/// Parses a series expression at the given truncation order.  Grammar:
/// sums and differences of products of factors, a factor being a rational
/// number, `t`, `exp(expr)`, `log1p(expr)`, a parenthesized expression, or
/// a negated factor.
pub fn parse_series(src: &str, order: usize) -> Result<Egf> {
    let mut p = SeriesParser {
        src: src.as_bytes(),
        pos: 0,
        order,
    };
    p.skip_ws();
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::Parse {
            at: p.pos,
            msg: "trailing input after series expression".to_string(),
        });
    }
    Ok(e)
}

struct SeriesParser<'a> {
    src: &'a [u8],
    pos: usize,
    order: usize,
}

impl SeriesParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> Result<()> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse {
                at: self.pos,
                msg: format!("expected `{}`", b as char),
            })
        }
    }

    fn expr(&mut self) -> Result<Egf> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?)?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Egf> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                acc = acc.mul(&self.factor()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Egf> {
        self.skip_ws();
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.factor()?.neg())
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.skip_ws();
                self.eat(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                self.skip_ws();
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let den = self.integer()?;
                    if den.is_zero() {
                        return Err(Error::Parse {
                            at: self.pos,
                            msg: "zero denominator".to_string(),
                        });
                    }
                    Ok(Egf::constant(Scalar::new(num, den), self.order))
                } else {
                    Ok(Egf::constant(Scalar::from_integer(num), self.order))
                }
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self
                    .peek()
                    .is_some_and(|b| b.is_ascii_alphanumeric() || b == b'_')
                {
                    self.pos += 1;
                }
                let word = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match word {
                    "t" => Ok(Egf::t(self.order)),
                    "exp" => {
                        self.skip_ws();
                        self.eat(b'(')?;
                        let inner = self.expr()?;
                        self.skip_ws();
                        self.eat(b')')?;
                        inner.exp()
                    }
                    "log1p" => {
                        self.skip_ws();
                        self.eat(b'(')?;
                        let inner = self.expr()?;
                        self.skip_ws();
                        self.eat(b')')?;
                        inner.log1p()
                    }
                    other => Err(Error::Parse {
                        at: start,
                        msg: format!("unknown series function `{other}`"),
                    }),
                }
            }
            _ => Err(Error::Parse {
                at: self.pos,
                msg: "expected a series factor".to_string(),
            }),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Parse {
                at: self.pos,
                msg: "expected digits".to_string(),
            });
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse::<BigInt>()
            .map_err(|e| Error::Parse {
                at: start,
                msg: e.to_string(),
            })
    }
}
