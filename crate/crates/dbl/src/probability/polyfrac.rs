//! Univariate rational functions in `e` with exact rational coefficients.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficients from degree 0 upward; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly(Vec<BigRational>);

impl Poly {
    pub fn zero() -> Poly {
        Poly(Vec::new())
    }

    pub fn constant(c: BigRational) -> Poly {
        Poly(vec![c]).trimmed()
    }

    /// `e`.
    pub fn var() -> Poly {
        Poly(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn from_coeffs(c: Vec<BigRational>) -> Poly {
        Poly(c).trimmed()
    }

    fn trimmed(mut self) -> Poly {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Degree of the lowest nonzero term.
    pub fn low_degree(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.0.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect()).trimmed()
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out).trimmed()
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        Poly(self.0.iter().map(|x| x * c).collect()).trimmed()
    }

    /// Euclidean division; `None` when `d` is zero.
    pub fn div_rem(&self, d: &Poly) -> Option<(Poly, Poly)> {
        let dd = d.degree()?;
        let lead = d.0[dd].clone();
        let mut rem = self.0.clone();
        let mut quot = vec![BigRational::zero(); self.0.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let c = &rem[rem.len() - 1] / &lead;
            for (j, dj) in d.0.iter().enumerate() {
                rem[k + j] -= &c * dj;
            }
            quot[k] = c;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        Some((Poly(quot).trimmed(), Poly(rem).trimmed()))
    }

    fn monic(&self) -> Poly {
        match self.0.last() {
            Some(l) => self.scale(&l.recip()),
            None => Poly::zero(),
        }
    }

    /// Monic greatest common divisor; zero only if both are zero.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => {}
                _ => write!(f, "{mag}·")?,
            }
            match i {
                0 => {}
                1 => write!(f, "e")?,
                _ => write!(f, "e^{i}")?,
            }
        }
        Ok(())
    }
}

/// `num / den` with `gcd(num, den) = 1` and the lowest nonzero coefficient
/// of `den` equal to 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyFrac {
    num: Poly,
    den: Poly,
}

impl PolyFrac {
    /// `None` when `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Option<PolyFrac> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(PolyFrac { num, den: Poly::constant(BigRational::one()) });
        }
        let g = num.gcd(&den);
        let (mut num, _) = num.div_rem(&g)?;
        let (mut den, _) = den.div_rem(&g)?;
        let low = den.coeff(den.low_degree().expect("nonzero"));
        let inv = low.recip();
        num = num.scale(&inv);
        den = den.scale(&inv);
        Some(PolyFrac { num, den })
    }

    pub fn constant(c: BigRational) -> PolyFrac {
        PolyFrac { num: Poly::constant(c), den: Poly::constant(BigRational::one()) }
    }

    pub fn poly(p: Poly) -> PolyFrac {
        PolyFrac::new(p, Poly::constant(BigRational::one())).expect("unit denominator")
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &PolyFrac) -> PolyFrac {
        if self.den == o.den {
            return PolyFrac::new(self.num.add(&o.num), self.den.clone()).expect("nonzero");
        }
        PolyFrac::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den)).expect("nonzero")
    }

    pub fn sub(&self, o: &PolyFrac) -> PolyFrac {
        self.add(&PolyFrac { num: o.num.neg(), den: o.den.clone() })
    }

    pub fn mul(&self, o: &PolyFrac) -> PolyFrac {
        PolyFrac::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero")
    }

    pub fn div(&self, o: &PolyFrac) -> Option<PolyFrac> {
        PolyFrac::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    /// Value at `e → 0⁺`; `None` when the fraction is unbounded there.
    pub fn limit(&self) -> Option<BigRational> {
        let Some(ln) = self.num.low_degree() else {
            return Some(BigRational::zero());
        };
        let ld = self.den.low_degree().expect("nonzero");
        match ln.cmp(&ld) {
            std::cmp::Ordering::Greater => Some(BigRational::zero()),
            std::cmp::Ordering::Equal => Some(self.num.coeff(ln) / self.den.coeff(ld)),
            std::cmp::Ordering::Less => None,
        }
    }

    /// Value at a point where the denominator does not vanish.
    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }
}

impl fmt::Display for PolyFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
pub(crate) fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_coeffs(c.iter().map(|&x| ratio(x, 1)).collect())
    }

    #[test]
    fn normal_form_cancels_common_factor() {
        // (e^2 - 1) / (2e + 2) = (e - 1) / 2
        let f = PolyFrac::new(p(&[-1, 0, 1]), p(&[2, 2])).unwrap();
        assert_eq!(f.num(), &Poly::from_coeffs(vec![ratio(-1, 2), ratio(1, 2)]));
        assert_eq!(f.den(), &p(&[1]));
        assert_eq!(f.limit(), Some(ratio(-1, 2)));
    }

    #[test]
    fn limits() {
        let e = PolyFrac::poly(Poly::var());
        assert_eq!(e.limit(), Some(ratio(0, 1)));
        // e / (3e) → 1/3 after cancellation
        let f = PolyFrac::new(p(&[0, 1]), p(&[0, 3])).unwrap();
        assert_eq!(f.limit(), Some(ratio(1, 3)));
        // 1 / e is unbounded
        let g = PolyFrac::new(p(&[1]), p(&[0, 1])).unwrap();
        assert_eq!(g.limit(), None);
        assert!(PolyFrac::new(p(&[1]), Poly::zero()).is_none());
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, -2, 0, 3]).to_string(), "1 - 2·e + 3·e^3");
        let f = PolyFrac::new(p(&[0, 1]), p(&[4, 1])).unwrap();
        assert_eq!(f.to_string(), "(1/4·e) / (1 + 1/4·e)");
    }

    fn small_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec(-4i64..5, 0..4).prop_map(|c| p(&c))
    }

    proptest! {
        #[test]
        fn field_laws_agree_with_point_evaluation(a in small_poly(), b in small_poly(), c in small_poly(), d in small_poly(), x in 1i64..7) {
            prop_assume!(!b.is_zero() && !d.is_zero());
            let f = PolyFrac::new(a, b).unwrap();
            let g = PolyFrac::new(c, d).unwrap();
            let x = ratio(x, 7);
            let (fx, gx) = (f.eval(&x), g.eval(&x));
            prop_assume!(fx.is_some() && gx.is_some());
            let (fx, gx) = (fx.unwrap(), gx.unwrap());
            if let Some(s) = f.add(&g).eval(&x) { prop_assert_eq!(s, &fx + &gx); }
            if let Some(m) = f.mul(&g).eval(&x) { prop_assert_eq!(m, &fx * &gx); }
            prop_assert_eq!(f.sub(&f), PolyFrac::constant(ratio(0, 1)));
            if !g.is_zero() {
                let q = f.div(&g).unwrap();
                prop_assert_eq!(q.mul(&g), f.clone());
            }
        }

        #[test]
        fn division_identity(a in small_poly(), d in small_poly()) {
            prop_assume!(!d.is_zero());
            let (q, r) = a.div_rem(&d).unwrap();
            prop_assert_eq!(q.mul(&d).add(&r), a);
            prop_assert!(r.degree() < d.degree() || r.is_zero());
        }
    }
}
