use crate::exec::Execution;

/// Möbius function `μ(x, y)` of a finite poset, stored per `y` as the list
/// of `(x, μ(x, y))` for all `x ≤ y`.
///
/// Built once (columns are independent, so they may be computed in
/// parallel) and read-only afterwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MobiusTable {
    below: Vec<Vec<(usize, i64)>>,
}

impl MobiusTable {
    pub fn new<F>(n: usize, leq: F, exec: Execution) -> Self
    where
        F: Fn(usize, usize) -> bool + Sync,
    {
        let height: Vec<usize> = (0..n).map(|z| (0..n).filter(|&w| leq(w, z)).count()).collect();
        let below = exec.map_range(n, |y| {
            // Interval [·, y], tallest first so every z > x is done before x.
            let mut down: Vec<usize> = (0..n).filter(|&x| leq(x, y)).collect();
            down.sort_by_key(|&x| std::cmp::Reverse(height[x]));
            let mut mu: Vec<(usize, i64)> = Vec::with_capacity(down.len());
            for &x in &down {
                let v = if x == y {
                    1
                } else {
                    -mu.iter().filter(|(z, _)| leq(x, *z)).map(|(_, m)| m).sum::<i64>()
                };
                mu.push((x, v));
            }
            mu.sort_unstable_by_key(|(x, _)| *x);
            mu
        });
        MobiusTable { below }
    }

    pub fn len(&self) -> usize {
        self.below.len()
    }

    pub fn is_empty(&self) -> bool {
        self.below.is_empty()
    }

    /// `μ(x, y)`, zero when `x ≰ y`.
    pub fn get(&self, x: usize, y: usize) -> i64 {
        self.below[y].binary_search_by_key(&x, |(z, _)| *z).map(|i| self.below[y][i].1).unwrap_or(0)
    }

    /// `(x, μ(x, y))` for every `x ≤ y`, ascending in `x`.
    pub fn interval_below(&self, y: usize) -> &[(usize, i64)] {
        &self.below[y]
    }

    /// Recovers `g` from its down-set sums `f(y) = Σ_{x ≤ y} g(x)`.
    pub fn invert<T, F>(&self, y: usize, f: F) -> T
    where
        T: std::iter::Sum<T>,
        F: Fn(usize, i64) -> T,
    {
        self.below[y].iter().map(|&(x, m)| f(x, m)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain() {
        let t = MobiusTable::new(3, |a, b| a <= b, Execution::Sequential);
        assert_eq!(t.get(0, 1), -1);
        assert_eq!(t.get(0, 2), 0);
        assert_eq!(t.get(2, 2), 1);
        assert_eq!(t.get(2, 0), 0);
    }

    #[test]
    fn boolean_lattice() {
        let t = MobiusTable::new(8, |a, b| a & b == a, Execution::default());
        for y in 0..8usize {
            for x in 0..8usize {
                if x & y == x {
                    let expect = if (y ^ x).count_ones() % 2 == 0 { 1 } else { -1 };
                    assert_eq!(t.get(x, y), expect);
                }
            }
        }
    }

    #[test]
    fn defining_sum_vanishes() {
        // Divisibility on 1..=12.
        let leq = |a: usize, b: usize| (b + 1) % (a + 1) == 0;
        let t = MobiusTable::new(12, leq, Execution::Sequential);
        for y in 0..12 {
            for x in 0..12 {
                if leq(x, y) && x != y {
                    let s: i64 = (0..12).filter(|&z| leq(x, z) && leq(z, y)).map(|z| t.get(x, z)).sum();
                    assert_eq!(s, 0);
                }
            }
        }
        // Classical Möbius: μ(1, n).
        assert_eq!(t.get(0, 5), 1); // n = 6
        assert_eq!(t.get(0, 3), 0); // n = 4
        assert_eq!(t.get(0, 4), -1); // n = 5
    }
}
