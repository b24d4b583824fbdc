use crate::C64;

/// Neumaier-compensated accumulator for complex sums.
///
/// Real and imaginary parts carry independent correction terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: C64,
    comp: C64,
}

#[inline]
fn step(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: C64) {
        step(&mut self.sum.re, &mut self.comp.re, x.re);
        step(&mut self.sum.im, &mut self.comp.im, x.im);
    }

    #[inline]
    pub fn value(&self) -> C64 {
        self.sum + self.comp
    }
}

impl core::iter::FromIterator<C64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = C64>>(iter: I) -> Self {
        let mut s = Self::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_low_bits() {
        let xs = [C64::new(1e16, 0.0), C64::new(1.0, 1.0), C64::new(-1e16, 0.0)];
        let s: CompensatedSum = xs.iter().copied().collect();
        assert_eq!(s.value(), C64::new(1.0, 1.0));
        let naive: C64 = xs.iter().sum();
        assert_ne!(naive, C64::new(1.0, 1.0));
    }
}
