//! Conjugacy classes in `GL_n(F_q)` via invariant factors of `xI - g`.

use super::field::FiniteField;

/// Polynomial over `F_q`, little-endian, without trailing zeros.
type Poly = Vec<u8>;

fn trim(p: &mut Poly) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

/// `a - c x^k b`.
fn sub_scaled(f: &FiniteField, a: &Poly, b: &Poly, c: u8, k: usize) -> Poly {
    let mut out = a.clone();
    if out.len() < b.len() + k {
        out.resize(b.len() + k, 0);
    }
    for (i, &x) in b.iter().enumerate() {
        out[i + k] = f.sub(out[i + k], f.mul(c, x));
    }
    trim(&mut out);
    out
}

fn mul(f: &FiniteField, a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u8; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

fn divrem(f: &FiniteField, a: &Poly, b: &Poly) -> (Poly, Poly) {
    let lead_inv = f.inv(*b.last().expect("nonzero divisor"));
    let mut quot = vec![0u8; a.len().saturating_sub(b.len()) + 1];
    let mut rem = a.clone();
    while rem.len() >= b.len() {
        let k = rem.len() - b.len();
        let c = f.mul(*rem.last().expect("nonempty"), lead_inv);
        quot[k] = c;
        rem = sub_scaled(f, &rem, b, c, k);
    }
    trim(&mut quot);
    (quot, rem)
}

fn monic(f: &FiniteField, p: &Poly) -> Poly {
    let inv = f.inv(*p.last().expect("nonzero"));
    p.iter().map(|&x| f.mul(x, inv)).collect()
}

/// Invariant factors of `g` (row-major `n x n`), monic, each dividing the next.
/// Two matrices are conjugate exactly when these agree.
pub(super) fn invariant_factors(f: &FiniteField, g: &[u8], n: usize) -> Vec<Poly> {
    let mut m: Vec<Vec<Poly>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let mut p = vec![f.sub(0, g[r * n + c])];
                    if r == c {
                        p.push(1);
                    }
                    trim(&mut p);
                    p
                })
                .collect()
        })
        .collect();
    for t in 0..n {
        loop {
            let pivot = (t..n)
                .flat_map(|r| (t..n).map(move |c| (r, c)))
                .filter(|&(r, c)| !m[r][c].is_empty())
                .min_by_key(|&(r, c)| m[r][c].len());
            let Some((r, c)) = pivot else {
                break;
            };
            m.swap(t, r);
            for row in m.iter_mut() {
                row.swap(t, c);
            }
            let mut clean = true;
            for i in t + 1..n {
                if m[i][t].is_empty() {
                    continue;
                }
                let (qt, rem) = divrem(f, &m[i][t], &m[t][t]);
                clean &= rem.is_empty();
                for j in t..n {
                    let prod = mul(f, &qt, &m[t][j]);
                    m[i][j] = sub_scaled(f, &m[i][j], &prod, 1, 0);
                }
            }
            for j in t + 1..n {
                if m[t][j].is_empty() {
                    continue;
                }
                let (qt, rem) = divrem(f, &m[t][j], &m[t][t]);
                clean &= rem.is_empty();
                for i in t..n {
                    let prod = mul(f, &qt, &m[i][t]);
                    m[i][j] = sub_scaled(f, &m[i][j], &prod, 1, 0);
                }
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..n).find(|&i| (t + 1..n).any(|j| !divrem(f, &m[i][j], &m[t][t]).1.is_empty()));
            match bad {
                Some(i) => {
                    for j in t..n {
                        let moved = m[i][j].clone();
                        m[t][j] = sub_scaled(f, &m[t][j], &moved, f.sub(0, 1), 0);
                    }
                }
                None => break,
            }
        }
    }
    (0..n).map(|t| monic(f, &m[t][t])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jordan_versus_scalar() {
        let f = FiniteField::new(3).unwrap();
        // the scalar 2 has factors (x-2, x-2); a Jordan block has (1, (x-2)^2)
        assert_eq!(invariant_factors(&f, &[2, 0, 0, 2], 2), vec![vec![1, 1], vec![1, 1]]);
        assert_eq!(invariant_factors(&f, &[2, 1, 0, 2], 2), vec![vec![1], vec![1, 2, 1]]);
        assert_eq!(invariant_factors(&f, &[2, 0, 0, 1], 2), vec![vec![1], vec![2, 0, 1]]);
    }

    #[test]
    fn class_count_of_gl2() {
        // GL_2(F_q) has q^2 - 1 conjugacy classes
        for q in [2u32, 3, 4, 5] {
            let f = FiniteField::new(q).unwrap();
            let mut keys = std::collections::BTreeSet::new();
            for code in 0..q.pow(4) {
                let g: Vec<u8> = (0..4).map(|i| ((code / q.pow(i)) % q) as u8).collect();
                if f.rank(&[g[0..2].to_vec(), g[2..4].to_vec()]) == 2 {
                    keys.insert(invariant_factors(&f, &g, 2));
                }
            }
            assert_eq!(keys.len() as u32, q * q - 1);
        }
    }
}
