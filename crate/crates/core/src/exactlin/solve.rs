//! Row reduction of sparse exact systems.

use std::collections::BTreeMap;

use super::scalar::Scalar;

/// Row-reduced echelon form of a system whose rows are indexed by arbitrary
/// ordered keys. Columns are processed in index order, so earlier columns
/// become pivots first and later ones are left free.
#[derive(Clone, Debug)]
pub struct EchelonSystem<K: Ord + Clone> {
    ncols: usize,
    /// pivot column -> (row as column map, rhs)
    pivots: BTreeMap<usize, (BTreeMap<usize, Scalar>, Scalar)>,
    /// rows that reduced to `0 = rhs` with rhs nonzero
    inconsistent: Vec<Scalar>,
    _key: std::marker::PhantomData<K>,
}

/// Solves `Σ_c x_c · columns[c] = rhs` exactly, returning the solution with all
/// free variables set to zero, or `None` if the system is inconsistent.
pub fn solve_columns<K: Ord + Clone>(
    columns: &[BTreeMap<K, Scalar>],
    rhs: &BTreeMap<K, Scalar>,
) -> Option<Vec<Scalar>> {
    let sys = EchelonSystem::from_columns(columns, rhs);
    sys.particular_solution()
}

impl<K: Ord + Clone> EchelonSystem<K> {
    pub fn from_columns(columns: &[BTreeMap<K, Scalar>], rhs: &BTreeMap<K, Scalar>) -> Self {
        let mut rows: BTreeMap<K, (BTreeMap<usize, Scalar>, Scalar)> = BTreeMap::new();
        for (c, col) in columns.iter().enumerate() {
            for (k, v) in col {
                if !v.is_zero() {
                    rows.entry(k.clone())
                        .or_insert_with(|| (BTreeMap::new(), Scalar::zero()))
                        .0
                        .insert(c, v.clone());
                }
            }
        }
        for (k, v) in rhs {
            if !v.is_zero() {
                rows.entry(k.clone())
                    .or_insert_with(|| (BTreeMap::new(), Scalar::zero()))
                    .1 = v.clone();
            }
        }
        let mut sys = EchelonSystem {
            ncols: columns.len(),
            pivots: BTreeMap::new(),
            inconsistent: Vec::new(),
            _key: std::marker::PhantomData,
        };
        for (_, row) in rows {
            sys.insert_row(row.0, row.1);
        }
        sys
    }

    fn insert_row(&mut self, mut row: BTreeMap<usize, Scalar>, mut rhs: Scalar) {
        // eliminate existing pivots, smallest column first
        loop {
            let hit = row
                .iter()
                .find(|(c, _)| self.pivots.contains_key(c))
                .map(|(c, v)| (*c, v.clone()));
            let Some((c, factor)) = hit else { break };
            let (prow, prhs) = &self.pivots[&c];
            for (pc, pv) in prow {
                let e = row.entry(*pc).or_insert_with(Scalar::zero);
                *e -= &(&factor * pv);
                if e.is_zero() {
                    row.remove(pc);
                }
            }
            rhs -= &(&factor * prhs);
        }
        let Some((&lead, lv)) = row.iter().next() else {
            if !rhs.is_zero() {
                self.inconsistent.push(rhs);
            }
            return;
        };
        let inv = lv.inv().expect("nonzero pivot");
        for v in row.values_mut() {
            *v = &*v * &inv;
        }
        rhs = &rhs * &inv;
        // back-substitute into existing pivot rows
        for (prow, prhs) in self.pivots.values_mut() {
            if let Some(f) = prow.get(&lead).cloned() {
                for (c, v) in &row {
                    let e = prow.entry(*c).or_insert_with(Scalar::zero);
                    *e -= &(&f * v);
                    if e.is_zero() {
                        prow.remove(c);
                    }
                }
                *prhs -= &(&f * &rhs);
            }
        }
        self.pivots.insert(lead, (row, rhs));
    }

    /// Empty system on `ncols` unknowns, to be filled with [`Self::add_row`].
    pub fn empty(ncols: usize) -> Self {
        EchelonSystem {
            ncols,
            pivots: BTreeMap::new(),
            inconsistent: Vec::new(),
            _key: std::marker::PhantomData,
        }
    }

    /// Adds a homogeneous row (a spanning vector of the row space).
    pub fn add_row(&mut self, row: BTreeMap<usize, Scalar>) {
        let row = row.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        self.insert_row(row, Scalar::zero());
    }

    /// Remainder of `v` modulo the row space, with every pivot entry cleared.
    pub fn reduce(&self, v: &BTreeMap<usize, Scalar>) -> BTreeMap<usize, Scalar> {
        let mut out: BTreeMap<usize, Scalar> = v
            .iter()
            .filter(|(_, x)| !x.is_zero())
            .map(|(c, x)| (*c, x.clone()))
            .collect();
        for (c, (prow, _)) in &self.pivots {
            if let Some(f) = out.get(c).cloned() {
                for (pc, pv) in prow {
                    let e = out.entry(*pc).or_insert_with(Scalar::zero);
                    *e -= &(&f * pv);
                    if e.is_zero() {
                        out.remove(pc);
                    }
                }
            }
        }
        out
    }

    pub fn is_consistent(&self) -> bool {
        self.inconsistent.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn particular_solution(&self) -> Option<Vec<Scalar>> {
        if !self.is_consistent() {
            return None;
        }
        let mut x = vec![Scalar::zero(); self.ncols];
        for (c, (_, rhs)) in &self.pivots {
            x[*c] = rhs.clone();
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(entries: &[(u8, i64)]) -> BTreeMap<u8, Scalar> {
        entries
            .iter()
            .map(|&(k, v)| (k, Scalar::from_int(v)))
            .collect()
    }

    #[test]
    fn solves_square_system() {
        // x + y = 3, x - y = 1
        let cols = vec![col(&[(0, 1), (1, 1)]), col(&[(0, 1), (1, -1)])];
        let x = solve_columns(&cols, &col(&[(0, 3), (1, 1)])).unwrap();
        assert_eq!(x, vec![Scalar::from_int(2), Scalar::from_int(1)]);
    }

    #[test]
    fn free_columns_are_later_ones() {
        let cols = vec![col(&[(0, 2)]), col(&[(0, 1)])];
        let x = solve_columns(&cols, &col(&[(0, 4)])).unwrap();
        assert_eq!(x, vec![Scalar::from_int(2), Scalar::zero()]);
    }

    #[test]
    fn reduce_clears_pivots() {
        let mut e: EchelonSystem<u8> = EchelonSystem::empty(3);
        e.add_row(
            [(0, Scalar::one()), (1, Scalar::one())]
                .into_iter()
                .collect(),
        );
        e.add_row(
            [(1, Scalar::one()), (2, Scalar::from_int(2))]
                .into_iter()
                .collect(),
        );
        let r = e.reduce(&[(0, Scalar::from_int(5))].into_iter().collect());
        // 5e0 = 5(e0 + e1) - 5(e1 + 2e2) + 10e2
        assert_eq!(r, [(2, Scalar::from_int(10))].into_iter().collect());
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn detects_inconsistency() {
        let cols = vec![col(&[(0, 1), (1, 1)])];
        assert!(solve_columns(&cols, &col(&[(0, 1), (1, 2)])).is_none());
    }
}
