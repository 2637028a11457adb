//! Row reduction over GF(2) with provenance tracking.

/// Incrementally built echelon basis. Each stored row remembers which of
/// the inserted vectors it is the sum of.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<Vec<bool>>,
    combos: Vec<Vec<bool>>,
    pivots: Vec<usize>,
    inserted: usize,
}

pub fn xor_into(dst: &mut [bool], src: &[bool]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_rows<'a>(rows: impl IntoIterator<Item = &'a Vec<bool>>) -> Self {
        let mut e = Echelon::new();
        for r in rows {
            e.insert(r);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the basis; returns the residual and which
    /// inserted vectors were added to it.
    pub fn reduce(&self, v: &[bool]) -> (Vec<bool>, Vec<bool>) {
        let mut res = v.to_vec();
        let mut combo = vec![false; self.inserted];
        for (i, &p) in self.pivots.iter().enumerate() {
            if res[p] {
                xor_into(&mut res, &self.rows[i]);
                xor_into(&mut combo, &self.combos[i]);
            }
        }
        (res, combo)
    }

    pub fn contains(&self, v: &[bool]) -> bool {
        self.reduce(v).0.iter().all(|b| !b)
    }

    /// Inserts `v`; returns true if it was independent.
    pub fn insert(&mut self, v: &[bool]) -> bool {
        let idx = self.inserted;
        self.inserted += 1;
        for c in self.combos.iter_mut() {
            c.push(false);
        }
        let (res, mut combo) = self.reduce(v);
        combo[idx] = true;
        let Some(p) = res.iter().position(|&b| b) else {
            return false;
        };
        // Keep the basis fully reduced so `reduce` is a single pass.
        for i in 0..self.rows.len() {
            if self.rows[i][p] {
                let (r, c) = (res.clone(), combo.clone());
                xor_into(&mut self.rows[i], &r);
                xor_into(&mut self.combos[i], &c);
            }
        }
        self.rows.push(res);
        self.combos.push(combo);
        self.pivots.push(p);
        true
    }

    /// Express `v` as a sum of inserted vectors, if it lies in the span.
    pub fn solve(&self, v: &[bool]) -> Option<Vec<bool>> {
        let (res, combo) = self.reduce(v);
        res.iter().all(|b| !b).then_some(combo)
    }
}

/// Solve `A c = b` over GF(2) where `A` is given by columns. Returns a
/// particular solution and a basis of the null space.
pub fn solve_affine(columns: &[Vec<bool>], b: &[bool]) -> Option<(Vec<bool>, Vec<Vec<bool>>)> {
    let m = columns.len();
    let rows = b.len();
    // Augmented matrix rows: [A | b].
    let mut a: Vec<Vec<bool>> = (0..rows)
        .map(|r| {
            let mut row: Vec<bool> = columns.iter().map(|col| col[r]).collect();
            row.push(b[r]);
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for col in 0..m {
        let Some(pr) = (r..rows).find(|&i| a[i][col]) else {
            continue;
        };
        a.swap(r, pr);
        for i in 0..rows {
            if i != r && a[i][col] {
                let pivot_row = a[r].clone();
                xor_into(&mut a[i], &pivot_row);
            }
        }
        pivot_cols.push(col);
        r += 1;
        if r == rows {
            break;
        }
    }
    if a[r..].iter().any(|row| row[m]) {
        return None;
    }
    let mut particular = vec![false; m];
    for (i, &pc) in pivot_cols.iter().enumerate() {
        particular[pc] = a[i][m];
    }
    let free: Vec<usize> = (0..m).filter(|c| !pivot_cols.contains(c)).collect();
    let null = free
        .iter()
        .map(|&f| {
            let mut v = vec![false; m];
            v[f] = true;
            for (i, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = a[i][f];
            }
            v
        })
        .collect();
    Some((particular, null))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_membership() {
        let rows = vec![
            vec![true, true, false],
            vec![false, true, true],
            vec![true, false, true],
        ];
        let e = Echelon::from_rows(&rows);
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&[true, false, true]));
        assert!(!e.contains(&[true, false, false]));
        let combo = e.solve(&[true, false, true]).unwrap();
        let mut acc = vec![false; 3];
        for (i, used) in combo.iter().enumerate() {
            if *used {
                xor_into(&mut acc, &rows[i]);
            }
        }
        assert_eq!(acc, vec![true, false, true]);
    }

    #[test]
    fn affine_solutions_satisfy_system() {
        let cols = vec![vec![true, false], vec![true, true], vec![false, true]];
        let (p, null) = solve_affine(&cols, &[true, false]).unwrap();
        let eval = |c: &[bool]| {
            let mut out = vec![false; 2];
            for (j, used) in c.iter().enumerate() {
                if *used {
                    xor_into(&mut out, &cols[j]);
                }
            }
            out
        };
        assert_eq!(eval(&p), vec![true, false]);
        for v in &null {
            assert_eq!(eval(v), vec![false, false]);
        }
        assert_eq!(null.len(), 1);
        assert!(solve_affine(&[vec![false, false]], &[true, false]).is_none());
    }
}
