//! Compensated (Kahan) summation.
//!
//! Means and co-moments throughout the crate use this fixed summation scheme
//! so that prefix and full-matrix results are reproducible across platforms.

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn add(&mut self, value: f64) {
        let y = value - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum
    }
}

pub(crate) fn kahan_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = KahanSum::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensates_small_terms() {
        // Every 1e-16 term vanishes under naive summation against 1.0.
        let mut naive = 1.0f64;
        let mut acc = KahanSum::new();
        acc.add(1.0);
        for _ in 0..1_000_000u32 {
            naive += 1e-16;
            acc.add(1e-16);
        }
        assert_eq!(naive, 1.0);
        assert!((acc.value() - (1.0 + 1e-10)).abs() < 1e-15);
    }

    #[test]
    fn sums_exact_integers_exactly() {
        let total = kahan_sum((1..=1000).map(f64::from));
        assert_eq!(total, 500_500.0);
    }
}
