//! Table-driven arithmetic in GF(2^m), 3 <= m <= 8.
//!
//! Elements are stored as `u16` bit patterns in the polynomial basis. Addition
//! is XOR and is left to the caller.

use crate::Error;

/// Element of GF(2^m) in polynomial-basis representation.
pub type Element = u16;

/// Smallest supported extension degree.
pub const MIN_DEGREE: u32 = 3;
/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 8;

/// Default primitive polynomial for each supported degree, as a bitmask
/// including the leading term.
pub fn default_primitive_poly(m: u32) -> Option<u32> {
    match m {
        3 => Some(0b1011),        // x^3 + x + 1
        4 => Some(0b1_0011),      // x^4 + x + 1
        5 => Some(0b10_0101),     // x^5 + x^2 + 1
        6 => Some(0b100_0011),    // x^6 + x + 1
        7 => Some(0b1000_1001),   // x^7 + x^3 + 1
        8 => Some(0b1_0001_1101), // x^8 + x^4 + x^3 + x^2 + 1
        _ => None,
    }
}

/// Precomputed log/antilog tables for GF(2^m).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldTable {
    m: u32,
    primitive_poly: u32,
    /// `log[x]` for nonzero `x`; `log[0]` is unused.
    log: Vec<u16>,
    /// Powers of alpha, stored twice over so `mul` never reduces an index.
    antilog: Vec<Element>,
    /// `quad[c]` is a root `y` of `y^2 + y = c`, or `NO_ROOT`.
    quad: Vec<Element>,
}

const NO_ROOT: Element = Element::MAX;

impl FieldTable {
    /// Builds the field for the default primitive polynomial of degree `m`.
    pub fn new(m: u32) -> Result<Self, Error> {
        let poly = default_primitive_poly(m).ok_or(Error::UnsupportedDegree(m))?;
        Self::build(m, poly)
    }

    /// Builds the tables for `GF(2)[x] / primitive_poly`.
    ///
    /// Fails if the polynomial does not have degree `m` or if the powers of
    /// `x` repeat before exponent `2^m - 1` (the polynomial is not primitive).
    pub fn build(m: u32, primitive_poly: u32) -> Result<Self, Error> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&m) {
            return Err(Error::UnsupportedDegree(m));
        }
        if primitive_poly >> m != 1 {
            return Err(Error::NotPrimitive {
                m,
                poly: primitive_poly,
            });
        }
        let size = 1usize << m;
        let order = size - 1;
        let mut log = vec![0u16; size];
        let mut seen = vec![false; size];
        let mut antilog = vec![0 as Element; 2 * order];
        let mut x: u32 = 1;
        for i in 0..order {
            if x == 0 || seen[x as usize] {
                return Err(Error::NotPrimitive {
                    m,
                    poly: primitive_poly,
                });
            }
            seen[x as usize] = true;
            antilog[i] = x as Element;
            antilog[i + order] = x as Element;
            log[x as usize] = i as u16;
            x <<= 1;
            if x & (1 << m) != 0 {
                x ^= primitive_poly;
            }
        }
        if x != 1 {
            return Err(Error::NotPrimitive {
                m,
                poly: primitive_poly,
            });
        }

        let mut quad = vec![NO_ROOT; size];
        for y in 0..size {
            let square = if y == 0 { 0 } else { antilog[2 * log[y] as usize] };
            let c = (square ^ y as Element) as usize;
            if quad[c] == NO_ROOT {
                quad[c] = y as Element;
            }
        }

        Ok(Self {
            m,
            primitive_poly,
            log,
            antilog,
            quad,
        })
    }

    /// Extension degree m.
    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn primitive_poly(&self) -> u32 {
        self.primitive_poly
    }

    /// Number of field elements, `2^m`.
    pub fn size(&self) -> usize {
        1 << self.m
    }

    /// Multiplicative order of alpha, `2^m - 1`.
    pub fn order(&self) -> usize {
        self.size() - 1
    }

    /// `alpha^i` for any `i`.
    #[inline]
    pub fn exp(&self, i: usize) -> Element {
        self.antilog[i % self.order()]
    }

    /// Discrete logarithm of a nonzero element.
    #[inline]
    pub fn log(&self, a: Element) -> Option<usize> {
        if a == 0 || a as usize >= self.size() {
            None
        } else {
            Some(self.log[a as usize] as usize)
        }
    }

    /// The antilog table `alpha^0, ..., alpha^(2^m - 2)`.
    pub fn antilog_table(&self) -> &[Element] {
        &self.antilog[..self.order()]
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        if a == 0 || b == 0 {
            0
        } else {
            self.antilog[self.log[a as usize] as usize + self.log[b as usize] as usize]
        }
    }

    pub fn inv(&self, a: Element) -> Result<Element, Error> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        let l = self.log[a as usize] as usize;
        Ok(self.antilog[(self.order() - l) % self.order()])
    }

    /// `a / b`; division by zero is an error.
    pub fn div(&self, a: Element, b: Element) -> Result<Element, Error> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e`, with the exponent reduced modulo `2^m - 1`. `0^0 = 1`.
    pub fn pow(&self, a: Element, e: u64) -> Element {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let l = self.log[a as usize] as u64;
        let order = self.order() as u64;
        self.antilog[((l * (e % order)) % order) as usize]
    }

    /// A root `y` of `y^2 + y = c`; the other root is `y ^ 1`.
    #[inline]
    pub fn solve_quadratic(&self, c: Element) -> Option<Element> {
        match self.quad[c as usize] {
            NO_ROOT => None,
            y => Some(y),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf8() -> FieldTable {
        FieldTable::build(3, 0b1011).unwrap()
    }

    #[test]
    fn gf8_antilog() {
        assert_eq!(gf8().antilog_table(), &[1, 2, 4, 3, 6, 7, 5]);
    }

    #[test]
    fn reducible_poly_rejected() {
        // x^3 + x^2 + x + 1 = (x + 1)(x^2 + 1)
        assert!(matches!(FieldTable::build(3, 0b1111), Err(Error::NotPrimitive { .. })));
        // irreducible but wrong degree
        assert!(FieldTable::build(3, 0b1_0011).is_err());
        assert!(FieldTable::build(9, 0b10_0001_0001).is_err());
    }

    #[test]
    fn gf256_cycle_is_full() {
        let f = FieldTable::build(8, 0b1_0001_1101).unwrap();
        let mut seen = vec![false; 256];
        for &a in f.antilog_table() {
            assert!(a != 0 && !seen[a as usize]);
            seen[a as usize] = true;
        }
        assert_eq!(f.antilog_table().len(), 255);
    }

    #[test]
    fn default_polys_are_primitive() {
        for m in MIN_DEGREE..=MAX_DEGREE {
            FieldTable::new(m).unwrap();
        }
    }

    #[test]
    fn mul_examples() {
        let f = gf8();
        assert_eq!(f.mul(2, 4), 3);
        assert_eq!(f.inv(1).unwrap(), 1);
        assert!(f.inv(0).is_err());
        for a in 0..8 {
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.mul(a, 0), 0);
        }
    }

    #[test]
    fn log_antilog_roundtrip_and_period() {
        for m in MIN_DEGREE..=MAX_DEGREE {
            let f = FieldTable::new(m).unwrap();
            for x in 1..f.size() as Element {
                assert_eq!(f.exp(f.log(x).unwrap()), x);
            }
            for i in 0..3 * f.order() {
                assert_eq!(f.exp(i), f.antilog_table()[i % f.order()]);
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_gf8() {
        let f = gf8();
        for a in 0..8 {
            for b in 0..8 {
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in 0..8 {
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, b ^ c), f.mul(a, b) ^ f.mul(a, c));
                }
            }
        }
    }

    #[test]
    fn inverse_and_fermat() {
        for m in MIN_DEGREE..=MAX_DEGREE {
            let f = FieldTable::new(m).unwrap();
            for a in 1..f.size() as Element {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                assert_eq!(f.pow(a, f.order() as u64), 1);
                assert_eq!(f.pow(a, 2), f.mul(a, a));
                assert_eq!(f.pow(a, 3), f.mul(a, f.mul(a, a)));
            }
        }
    }

    #[test]
    fn quadratic_solver() {
        let f = FieldTable::new(8).unwrap();
        let mut solvable = 0;
        for c in 0..256u16 {
            if let Some(y) = f.solve_quadratic(c) {
                solvable += 1;
                assert_eq!(f.mul(y, y) ^ y, c);
                let z = y ^ 1;
                assert_eq!(f.mul(z, z) ^ z, c);
            }
        }
        // exactly half the elements have trace zero
        assert_eq!(solvable, 128);
    }
}
