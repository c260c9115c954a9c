//! Finite inverse semigroups given by multiplication tables, and their left
//! regular representation by 0/1 partial isometries on `ℂⁿ`:
//! `π(s) e_t = e_{st}` when `tt* ≤ s*s`, and `0` otherwise.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numlin::{approx_equal, ComplexMatrix, ToleranceConfig, ONE};
use crate::pisom::{make_partial_isometry, PartialIsometry};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InvsgError {
    #[error("table is not an inverse semigroup: {0}")]
    InvalidTable(String),
    #[error("element {0} is not idempotent")]
    NotIdempotent(usize),
    #[error("element index {index} out of range (n = {n})")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("representation of {0} is not a partial isometry")]
    NotPartialIsometry(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InverseSemigroupTable {
    pub n: usize,
    pub mult: Vec<Vec<usize>>,
    pub star: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Shape { detail: String },
    NotAssociative { a: usize, b: usize, c: usize },
    NotInvolution { a: usize },
    StarNotAntiMultiplicative { a: usize, b: usize },
    NotRegular { a: usize },
    IdempotentsDoNotCommute { e: usize, f: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape { detail } => write!(f, "malformed table: {detail}"),
            Violation::NotAssociative { a, b, c } => write!(f, "({a}·{b})·{c} ≠ {a}·({b}·{c})"),
            Violation::NotInvolution { a } => write!(f, "{a}** ≠ {a}"),
            Violation::StarNotAntiMultiplicative { a, b } => write!(f, "({a}·{b})* ≠ {b}*·{a}*"),
            Violation::NotRegular { a } => write!(f, "{a}·{a}*·{a} ≠ {a} or {a}*·{a}·{a}* ≠ {a}*"),
            Violation::IdempotentsDoNotCommute { e, f: g } => {
                write!(f, "idempotents {e} and {g} do not commute")
            }
        }
    }
}

impl InverseSemigroupTable {
    pub fn new(mult: Vec<Vec<usize>>, star: Vec<usize>) -> Self {
        Self {
            n: star.len(),
            mult,
            star,
            names: None,
        }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        self.names = Some(names);
        self
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    pub fn is_idempotent(&self, a: usize) -> bool {
        self.mult[a][a] == a
    }

    pub fn name(&self, a: usize) -> String {
        self.names
            .as_ref()
            .and_then(|v| v.get(a).cloned())
            .unwrap_or_else(|| a.to_string())
    }

    fn check_index(&self, index: usize) -> Result<(), InvsgError> {
        if index < self.n {
            Ok(())
        } else {
            Err(InvsgError::IndexOutOfRange { index, n: self.n })
        }
    }
}

fn shape_violations(t: &InverseSemigroupTable) -> Vec<Violation> {
    let mut v = Vec::new();
    let mut shape = |detail: String| v.push(Violation::Shape { detail });
    if t.n == 0 {
        shape("empty table".into());
    }
    if t.mult.len() != t.n {
        shape(format!("mult has {} rows, expected {}", t.mult.len(), t.n));
    }
    if t.star.len() != t.n {
        shape(format!(
            "star has length {}, expected {}",
            t.star.len(),
            t.n
        ));
    }
    for (i, row) in t.mult.iter().enumerate() {
        if row.len() != t.n {
            shape(format!("mult row {i} has length {}", row.len()));
        }
        if let Some(&x) = row.iter().find(|&&x| x >= t.n) {
            shape(format!("mult row {i} contains {x}"));
        }
    }
    if let Some(&x) = t.star.iter().find(|&&x| x >= t.n) {
        shape(format!("star contains {x}"));
    }
    if let Some(names) = &t.names {
        if names.len() != t.n {
            shape(format!("{} names for {} elements", names.len(), t.n));
        }
    }
    v
}

/// Exhaustive check of the axioms; an empty list means the table is valid.
pub fn validate_table(t: &InverseSemigroupTable) -> Vec<Violation> {
    let shape = shape_violations(t);
    if !shape.is_empty() {
        return shape;
    }
    let n = t.n;
    let m = |a: usize, b: usize| t.mult[a][b];
    let s = |a: usize| t.star[a];
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if m(m(a, b), c) != m(a, m(b, c)) {
                    out.push(Violation::NotAssociative { a, b, c });
                }
            }
        }
    }
    for a in 0..n {
        if s(s(a)) != a {
            out.push(Violation::NotInvolution { a });
        }
        if m(m(a, s(a)), a) != a || m(m(s(a), a), s(a)) != s(a) {
            out.push(Violation::NotRegular { a });
        }
        for b in 0..n {
            if s(m(a, b)) != m(s(b), s(a)) {
                out.push(Violation::StarNotAntiMultiplicative { a, b });
            }
        }
    }
    let idempotents: Vec<usize> = (0..n).filter(|&e| m(e, e) == e).collect();
    for (i, &e) in idempotents.iter().enumerate() {
        for &f in &idempotents[i + 1..] {
            if m(e, f) != m(f, e) {
                out.push(Violation::IdempotentsDoNotCommute { e, f });
            }
        }
    }
    out
}

/// `a ≤ b` for idempotents: `a·b = a`.
pub fn natural_order_leq(
    t: &InverseSemigroupTable,
    a: usize,
    b: usize,
) -> Result<bool, InvsgError> {
    for x in [a, b] {
        t.check_index(x)?;
        if !t.is_idempotent(x) {
            return Err(InvsgError::NotIdempotent(x));
        }
    }
    Ok(t.mul(a, b) == a)
}

/// `π(s)` for every element `s`, in table order.
pub fn barnes_representation(
    t: &InverseSemigroupTable,
    cfg: &ToleranceConfig,
) -> Result<Vec<PartialIsometry>, InvsgError> {
    let violations = validate_table(t);
    if let Some(v) = violations.first() {
        return Err(InvsgError::InvalidTable(v.to_string()));
    }
    let n = t.n;
    let range_idem: Vec<usize> = (0..n).map(|x| t.mul(x, t.star[x])).collect();
    let domain_idem: Vec<usize> = (0..n).map(|x| t.mul(t.star[x], x)).collect();
    (0..n)
        .map(|s| {
            let mut m = ComplexMatrix::zeros(n, n);
            for u in 0..n {
                if t.mul(range_idem[u], domain_idem[s]) == range_idem[u] {
                    m[(t.mul(s, u), u)] = ONE;
                }
            }
            make_partial_isometry(&m, cfg).map_err(|_| InvsgError::NotPartialIsometry(t.name(s)))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RepresentationCheck {
    /// `max ‖π(s)π(u) − π(su)‖_F`.
    pub multiplicative_residual: f64,
    /// `max ‖π(s*) − π(s)ᴴ‖_F`.
    pub star_residual: f64,
    pub injective: bool,
}

pub fn check_representation(
    t: &InverseSemigroupTable,
    pi: &[PartialIsometry],
    cfg: &ToleranceConfig,
) -> RepresentationCheck {
    let mut multiplicative_residual: f64 = 0.0;
    let mut star_residual: f64 = 0.0;
    for s in 0..t.n {
        for u in 0..t.n {
            let prod = pi[s].matrix() * pi[u].matrix();
            multiplicative_residual =
                multiplicative_residual.max((&prod - pi[t.mul(s, u)].matrix()).frobenius_norm());
        }
        star_residual = star_residual
            .max((pi[t.star[s]].matrix() - &pi[s].matrix().adjoint()).frobenius_norm());
    }
    let mut injective = true;
    for s in 0..t.n {
        for u in (s + 1)..t.n {
            if approx_equal(pi[s].matrix(), pi[u].matrix(), cfg).unwrap_or(true) {
                injective = false;
            }
        }
    }
    RepresentationCheck {
        multiplicative_residual,
        star_residual,
        injective,
    }
}

/// The cyclic group `ℤ_k` with `s* = s⁻¹`.
pub fn cyclic_group(k: usize) -> InverseSemigroupTable {
    let mult = (0..k)
        .map(|a| (0..k).map(|b| (a + b) % k).collect())
        .collect();
    let star = (0..k).map(|a| (k - a) % k).collect();
    InverseSemigroupTable::new(mult, star).with_names((0..k).map(|a| format!("g{a}")).collect())
}

/// A partial bijection of `{0, …, n−1}`: `map[x] = Some(y)` sends `x` to `y`.
type PartialMap = Vec<Option<usize>>;

fn partial_bijections(n: usize) -> Vec<PartialMap> {
    fn extend(
        x: usize,
        n: usize,
        used: &mut Vec<bool>,
        cur: &mut PartialMap,
        out: &mut Vec<PartialMap>,
    ) {
        if x == n {
            out.push(cur.clone());
            return;
        }
        cur.push(None);
        extend(x + 1, n, used, cur, out);
        cur.pop();
        for y in 0..n {
            if !used[y] {
                used[y] = true;
                cur.push(Some(y));
                extend(x + 1, n, used, cur, out);
                cur.pop();
                used[y] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(0, n, &mut vec![false; n], &mut Vec::new(), &mut out);
    let domain = |m: &PartialMap| m.iter().filter(|y| y.is_some()).count();
    out.sort_by(|a, b| domain(a).cmp(&domain(b)).then_with(|| a.cmp(b)));
    out
}

fn map_name(m: &PartialMap) -> String {
    let parts: Vec<String> = m
        .iter()
        .enumerate()
        .filter_map(|(x, y)| y.map(|y| format!("{}→{}", x + 1, y + 1)))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(",")
    }
}

/// The symmetric inverse monoid `I_n` of all partial bijections of an
/// `n`-set, composed as `(st)(x) = s(t(x))`. Elements are ordered by domain
/// size, so index 0 is the empty map.
pub fn symmetric_inverse_monoid(n: usize) -> InverseSemigroupTable {
    let maps = partial_bijections(n);
    let index = |m: &PartialMap| {
        maps.iter()
            .position(|x| x == m)
            .expect("closed under composition")
    };
    let mult = maps
        .iter()
        .map(|s| {
            maps.iter()
                .map(|t| {
                    let st: PartialMap = t.iter().map(|y| y.and_then(|y| s[y])).collect();
                    index(&st)
                })
                .collect()
        })
        .collect();
    let star = maps
        .iter()
        .map(|s| {
            let mut inv = vec![None; n];
            for (x, y) in s.iter().enumerate() {
                if let Some(y) = y {
                    inv[*y] = Some(x);
                }
            }
            index(&inv)
        })
        .collect();
    InverseSemigroupTable::new(mult, star).with_names(maps.iter().map(map_name).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn builtin_tables_are_valid() {
        for t in [
            cyclic_group(2),
            cyclic_group(5),
            symmetric_inverse_monoid(1),
            symmetric_inverse_monoid(2),
            symmetric_inverse_monoid(3),
        ] {
            assert_eq!(validate_table(&t), vec![]);
        }
        assert_eq!(symmetric_inverse_monoid(2).n, 7);
        assert_eq!(symmetric_inverse_monoid(3).n, 34);
    }

    #[test]
    fn noncommuting_idempotents_are_reported() {
        // left-zero band {a, b}: xy = x, every element idempotent, ab ≠ ba
        let t = InverseSemigroupTable::new(vec![vec![0, 0], vec![1, 1]], vec![0, 1]);
        let v = validate_table(&t);
        assert!(v.contains(&Violation::IdempotentsDoNotCommute { e: 0, f: 1 }));
    }

    #[test]
    fn malformed_tables_are_reported() {
        let t = InverseSemigroupTable::new(vec![vec![0, 3], vec![1]], vec![0, 1]);
        assert!(matches!(validate_table(&t)[0], Violation::Shape { .. }));
        let t = InverseSemigroupTable::new(vec![vec![1, 0], vec![0, 1]], vec![0, 0]);
        let v = validate_table(&t);
        assert!(v
            .iter()
            .any(|x| matches!(x, Violation::NotInvolution { a: 1 })));
        assert!(matches!(
            barnes_representation(&t, &cfg()),
            Err(InvsgError::InvalidTable(_))
        ));
    }

    #[test]
    fn natural_order_in_i2() {
        let t = symmetric_inverse_monoid(2);
        let id = t
            .names
            .as_ref()
            .unwrap()
            .iter()
            .position(|n| n == "1→1,2→2")
            .unwrap();
        let e1 = t
            .names
            .as_ref()
            .unwrap()
            .iter()
            .position(|n| n == "1→1")
            .unwrap();
        assert!(natural_order_leq(&t, id, id).unwrap());
        assert!(natural_order_leq(&t, 0, e1).unwrap());
        assert!(natural_order_leq(&t, 0, id).unwrap());
        assert!(!natural_order_leq(&t, id, e1).unwrap());
        let swap = t
            .names
            .as_ref()
            .unwrap()
            .iter()
            .position(|n| n == "1→2,2→1")
            .unwrap();
        assert_eq!(
            natural_order_leq(&t, swap, id),
            Err(InvsgError::NotIdempotent(swap))
        );
    }

    #[test]
    fn barnes_on_i1() {
        let t = symmetric_inverse_monoid(1);
        let pi = barnes_representation(&t, &cfg()).unwrap();
        assert_eq!(pi[1].matrix(), &ComplexMatrix::identity(2));
        let mut p0 = ComplexMatrix::zeros(2, 2);
        p0[(0, 0)] = ONE;
        assert_eq!(pi[0].matrix(), &p0);
    }

    #[test]
    fn barnes_on_z2_is_the_regular_representation() {
        let t = cyclic_group(2);
        let pi = barnes_representation(&t, &cfg()).unwrap();
        assert_eq!(pi[0].matrix(), &ComplexMatrix::identity(2));
        assert_eq!(
            pi[1].matrix(),
            &ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
        );
    }

    #[test]
    fn barnes_on_i2_and_i3() {
        for t in [symmetric_inverse_monoid(2), symmetric_inverse_monoid(3)] {
            let pi = barnes_representation(&t, &cfg()).unwrap();
            let check = check_representation(&t, &pi, &cfg());
            assert!(check.multiplicative_residual <= 1e-12);
            assert!(check.star_residual <= 1e-12);
            assert!(check.injective);
            for e in (0..t.n).filter(|&e| t.is_idempotent(e)) {
                for f in (0..t.n).filter(|&f| t.is_idempotent(f)) {
                    let c = crate::numlin::commutator_norm(pi[e].matrix(), pi[f].matrix()).unwrap();
                    assert!(c < 1e-12);
                }
            }
        }
    }

    #[test]
    fn table_json_round_trip() {
        let t = symmetric_inverse_monoid(2);
        let json = serde_json::to_string(&t).unwrap();
        let back: InverseSemigroupTable = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
        let bare: InverseSemigroupTable =
            serde_json::from_str(r#"{"n":1,"mult":[[0]],"star":[0]}"#).unwrap();
        assert_eq!(bare.names, None);
    }
}
