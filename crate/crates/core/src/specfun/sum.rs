use num_complex::Complex64;

/// Compensated (Kahan) accumulator for complex terms.
///
/// Terms are consumed in call order, so the result is reproducible as long
/// as the caller fixes that order.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: Complex64,
    carry: Complex64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, term: Complex64) {
        let y = term - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> Complex64 {
        self.sum
    }
}

impl FromIterator<Complex64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut acc = KahanSum::new();
        for t in iter {
            acc.add(t);
        }
        acc
    }
}
