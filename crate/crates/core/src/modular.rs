//! Words in the modular group `<I, R | I^2 = R^3 = 1>`, Farey edges, the
//! Mobius and star actions, edge labels and crossing sequences.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Letter {
    I,
    R,
    R2,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        match self {
            Letter::I => Letter::I,
            Letter::R => Letter::R2,
            Letter::R2 => Letter::R,
        }
    }

    fn is_rotation(self) -> bool {
        self != Letter::I
    }

    fn power(self) -> u8 {
        match self {
            Letter::I => 0,
            Letter::R => 1,
            Letter::R2 => 2,
        }
    }

    pub fn matrix(self) -> Mat2 {
        match self {
            Letter::I => [[0, 1], [-1, 0]],
            Letter::R => [[-1, 1], [-1, 0]],
            Letter::R2 => [[0, -1], [1, -1]],
        }
    }
}

pub type Mat2 = [[i64; 2]; 2];

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

/// A word over `I, R, R^2`; letters multiply left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GroupWord(pub Vec<Letter>);

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<&str> = self
            .0
            .iter()
            .map(|l| match l {
                Letter::I => "I",
                Letter::R => "R",
                Letter::R2 => "Rr",
            })
            .collect();
        write!(f, "{}", s.join(" "))
    }
}

impl GroupWord {
    pub fn empty() -> Self {
        GroupWord(Vec::new())
    }

    pub fn from_letters(l: &[Letter]) -> Self {
        GroupWord(l.to_vec())
    }

    pub fn t1() -> Self {
        GroupWord(vec![Letter::I, Letter::R])
    }

    pub fn t2() -> Self {
        GroupWord(vec![Letter::I, Letter::R2])
    }

    /// Parses tokens `I`, `R`, `Rr` (or `R2`), `T1`, `T2`; whitespace is optional.
    pub fn parse(s: &str) -> Result<Self> {
        let mut out = Vec::new();
        let b = s.as_bytes();
        let mut k = 0;
        while k < b.len() {
            let c = b[k];
            if c.is_ascii_whitespace() || c == b'*' || c == b'.' {
                k += 1;
                continue;
            }
            let next = b.get(k + 1).copied();
            match (c, next) {
                (b'T', Some(b'1')) => {
                    out.extend([Letter::I, Letter::R]);
                    k += 2;
                }
                (b'T', Some(b'2')) => {
                    out.extend([Letter::I, Letter::R2]);
                    k += 2;
                }
                (b'R', Some(b'r')) | (b'R', Some(b'2')) => {
                    out.push(Letter::R2);
                    k += 2;
                }
                (b'R', _) => {
                    out.push(Letter::R);
                    k += 1;
                }
                (b'I', _) => {
                    out.push(Letter::I);
                    k += 1;
                }
                _ => return Err(Error::Parse(format!("unexpected character {:?} in word {s:?}", c as char))),
            }
        }
        Ok(GroupWord(out))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Free reduction in `Z/2 * Z/3`: the unique alternating normal form.
    pub fn normalize(&self) -> Self {
        let mut st: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            match st.last().copied() {
                Some(Letter::I) if l == Letter::I => {
                    st.pop();
                }
                Some(top) if top.is_rotation() && l.is_rotation() => {
                    st.pop();
                    match (top.power() + l.power()) % 3 {
                        1 => st.push(Letter::R),
                        2 => st.push(Letter::R2),
                        _ => {}
                    }
                }
                _ => st.push(l),
            }
        }
        GroupWord(st)
    }

    pub fn is_normal(&self) -> bool {
        self.0.windows(2).all(|w| w[0].is_rotation() != w[1].is_rotation())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&o.0);
        GroupWord(v).normalize()
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut v = Vec::with_capacity(self.0.len() * n);
        for _ in 0..n {
            v.extend_from_slice(&self.0);
        }
        GroupWord(v).normalize()
    }

    pub fn inverse(&self) -> Self {
        GroupWord(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// The same letters in reverse order; an anti-automorphism of the group.
    pub fn reversed(&self) -> Self {
        GroupWord(self.0.iter().rev().copied().collect())
    }

    pub fn i_count(&self) -> usize {
        self.0.iter().filter(|&&l| l == Letter::I).count()
    }

    pub fn matrix(&self) -> Mat2 {
        self.0.iter().fold([[1, 0], [0, 1]], |m, l| mat2_mul(&m, &l.matrix()))
    }

    pub fn trace(&self) -> i64 {
        let m = self.matrix();
        m[0][0] + m[1][1]
    }

    /// Membership in the index-2 subgroup, by I-count parity and independently
    /// from the matrix; disagreement is reported as an internal inconsistency.
    ///
    /// The matrix test reduces mod 2: the subgroup is the preimage of the
    /// even permutations of `SL(2, F_2) = S_3`, i.e. odd trace (a 3-cycle) or
    /// the identity mod 2. Odd trace alone misses the level-2 congruence
    /// subgroup, whose traces are even.
    pub fn in_subgroup_o(&self) -> Result<bool> {
        let by_parity = self.i_count() % 2 == 0;
        let m = self.matrix();
        let odd = |x: i64| x.rem_euclid(2) == 1;
        let by_matrix = odd(m[0][0] + m[1][1]) || (odd(m[0][0]) && odd(m[1][1]) && !odd(m[0][1]) && !odd(m[1][0]));
        if by_parity != by_matrix {
            return Err(Error::InternalInconsistency("I-count parity disagrees with trace parity"));
        }
        Ok(by_parity)
    }

    /// Writes `self = base * core * base^{-1}` with `core` cyclically reduced.
    pub fn cyclic_reduce(&self) -> (GroupWord, GroupWord) {
        let mut base = GroupWord::empty();
        let mut core = self.normalize();
        loop {
            let n = core.len();
            if n < 2 {
                break;
            }
            let (f, l) = (core.0[0], core.0[n - 1]);
            if f.is_rotation() != l.is_rotation() {
                break;
            }
            let x = GroupWord(vec![f]);
            base = base.mul(&x);
            core = x.inverse().mul(&core).mul(&x);
        }
        (base, core)
    }

    /// Finite order in `Z/2 * Z/3`: conjugate into a factor.
    pub fn is_finite_order(&self) -> bool {
        self.cyclic_reduce().1.len() <= 1
    }
}

/// All normal-form words of length at most `max_len`, shortest first.
pub fn normal_forms(max_len: usize) -> Vec<GroupWord> {
    let mut out = vec![GroupWord::empty()];
    let mut frontier = vec![GroupWord::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for l in [Letter::I, Letter::R, Letter::R2] {
                let ok = match w.0.last() {
                    None => true,
                    Some(&last) => last.is_rotation() != l.is_rotation(),
                };
                if ok {
                    let mut v = w.0.clone();
                    v.push(l);
                    next.push(GroupWord(v));
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Point of the extended rational line: `(p, q)` with `q >= 0`, `gcd = 1`, infinity `= (1, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Cusp(pub i64, pub i64);

impl Cusp {
    pub const INF: Cusp = Cusp(1, 0);

    pub fn new(p: i64, q: i64) -> Result<Cusp> {
        if p == 0 && q == 0 {
            return Err(Error::NotAFareyEdge);
        }
        let g = p.gcd(&q);
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 || (q == 0 && p < 0) {
            p = -p;
            q = -q;
        }
        Ok(Cusp(p, q))
    }

    pub fn is_inf(&self) -> bool {
        self.1 == 0
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_inf() {
            f64::INFINITY
        } else {
            self.0 as f64 / self.1 as f64
        }
    }

    /// Order on the extended line with infinity largest.
    pub fn cmp_ext(&self, o: &Cusp) -> Ordering {
        match (self.is_inf(), o.is_inf()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            _ => (self.0 as i128 * o.1 as i128).cmp(&(o.0 as i128 * self.1 as i128)),
        }
    }
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inf() {
            write!(f, "inf")
        } else if self.1 == 1 {
            write!(f, "{}", self.0)
        } else {
            write!(f, "{}/{}", self.0, self.1)
        }
    }
}

fn det2(x: (i64, i64), y: (i64, i64)) -> i64 {
    x.0 * y.1 - x.1 * y.0
}

/// Oriented Farey edge `[tail, head]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FareyGeodesic {
    pub tail: Cusp,
    pub head: Cusp,
}

impl fmt::Display for FareyGeodesic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.tail, self.head)
    }
}

impl FareyGeodesic {
    pub fn new(tail: Cusp, head: Cusp) -> Result<Self> {
        if det2((tail.0, tail.1), (head.0, head.1)).abs() != 1 {
            return Err(Error::NotAFareyEdge);
        }
        Ok(FareyGeodesic { tail, head })
    }

    /// `e0 = [inf, 0]`.
    pub fn e0() -> Self {
        FareyGeodesic { tail: Cusp::INF, head: Cusp(0, 1) }
    }

    /// Endpoint vectors `(X, Y)` with `det(X, Y) = 1`.
    fn reps(&self) -> ((i64, i64), (i64, i64)) {
        let x = (self.tail.0, self.tail.1);
        let y = (self.head.0, self.head.1);
        if det2(x, y) == 1 {
            (x, y)
        } else {
            (x, (-y.0, -y.1))
        }
    }

    fn from_reps(x: (i64, i64), y: (i64, i64)) -> Result<Self> {
        FareyGeodesic::new(Cusp::new(x.0, x.1)?, Cusp::new(y.0, y.1)?)
    }

    /// Same edge with reversed orientation.
    pub fn reversed(&self) -> Self {
        FareyGeodesic { tail: self.head, head: self.tail }
    }

    /// Fractional-linear action on both endpoints.
    pub fn mobius(&self, w: &GroupWord) -> Self {
        let m = w.matrix();
        let act = |c: Cusp| Cusp::new(m[0][0] * c.0 + m[0][1] * c.1, m[1][0] * c.0 + m[1][1] * c.1).unwrap();
        FareyGeodesic { tail: act(self.tail), head: act(self.head) }
    }

    /// The star action, generator by generator: with `det(X, Y) = 1`,
    /// `T1 * [X, Y] = [X, X + Y]`, `T2 * [X, Y] = [X + Y, Y]`, `I * [X, Y] = [Y, X]`,
    /// and `R = I T1`. Letters act from the right end of the word inward.
    pub fn star(&self, w: &GroupWord) -> Self {
        let mut e = *self;
        for &l in w.0.iter().rev() {
            e = e.star_letter(l);
        }
        e
    }

    fn star_letter(&self, l: Letter) -> Self {
        match l {
            Letter::I => self.reversed(),
            Letter::R => self.star_t1().reversed(),
            Letter::R2 => self.star_t1().reversed().star_t1().reversed(),
        }
    }

    fn star_t1(&self) -> Self {
        let (x, y) = self.reps();
        FareyGeodesic::from_reps(x, (x.0 + y.0, x.1 + y.1)).unwrap()
    }

    /// Position along the boundary arc starting at this edge's head and
    /// increasing towards its tail.
    fn arc_key(&self, z: &Cusp) -> (u8, Cusp) {
        if z.cmp_ext(&self.head) != Ordering::Less {
            (0, *z)
        } else {
            (1, *z)
        }
    }

    fn arc_cmp(&self, a: &Cusp, b: &Cusp) -> Ordering {
        let (ka, kb) = (self.arc_key(a), self.arc_key(b));
        ka.0.cmp(&kb.0).then_with(|| ka.1.cmp_ext(&kb.1))
    }

    /// `H_o ⊆ H_self`, where `H_e` is the half-plane whose ideal boundary is
    /// the arc from `e.head` increasing to `e.tail`.
    pub fn half_plane_contains(&self, o: &FareyGeodesic) -> bool {
        use Ordering::*;
        let le = |a: &Cusp, b: &Cusp| self.arc_cmp(a, b) != Greater;
        let lt = |a: &Cusp, b: &Cusp| self.arc_cmp(a, b) == Less;
        le(&self.head, &o.head) && lt(&o.head, &o.tail) && le(&o.tail, &self.tail)
    }

    /// Whether the edge separates two boundary points (given as reals or infinity).
    pub fn separates(&self, a: f64, b: f64) -> bool {
        let (t, h) = (self.tail.to_f64(), self.head.to_f64());
        let inside = |z: f64| {
            // Arc from head increasing to tail.
            if h < t {
                z > h && z < t
            } else {
                z > h || z < t
            }
        };
        inside(a) != inside(b)
    }
}

/// The unique `gamma` with `e = gamma * e0`.
pub fn label_word(e: &FareyGeodesic) -> GroupWord {
    let (x, y) = e.reps();
    // G = [X Y] sends e0 to e under the Mobius action; star-action labels are reversed words.
    let mut letters: Vec<Letter> = Vec::new();
    let (mut a, mut b, mut c, mut d) = (x.0, y.0, x.1, y.1);
    let push_u = |letters: &mut Vec<Letter>, k: i64| {
        // U = R I, U^{-1} = I R^2.
        for _ in 0..k.unsigned_abs() {
            if k > 0 {
                letters.extend([Letter::R, Letter::I]);
            } else {
                letters.extend([Letter::I, Letter::R2]);
            }
        }
    };
    while c != 0 {
        let qt = Integer::div_floor(&a, &c);
        push_u(&mut letters, qt);
        let (a1, b1) = (a - qt * c, b - qt * d);
        // [[a1,b1],[c,d]] = I * [[-c,-d],[a1,b1]].
        letters.push(Letter::I);
        let (na, nb, nc, nd) = (-c, -d, a1, b1);
        a = na;
        b = nb;
        c = nc;
        d = nd;
    }
    // Remaining matrix is +-[[1, k], [0, 1]].
    push_u(&mut letters, b / a);
    GroupWord(letters).normalize().reversed().normalize()
}

/// True for a nonempty positive word in `T1 = I R`, `T2 = I R^2`.
pub fn is_positive_t_word(w: &GroupWord) -> bool {
    let w = w.normalize();
    !w.is_empty() && w.len() % 2 == 0 && w.0.chunks(2).all(|c| c[0] == Letter::I && c[1].is_rotation())
}

/// Crossing letters `R I R I, R I R^2 I, R^2 I R^2 I, R^2 I R I`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum WLetter {
    RIRI,
    RIR2I,
    R2IR2I,
    R2IRI,
}

impl WLetter {
    pub const ALL: [WLetter; 4] = [WLetter::RIRI, WLetter::RIR2I, WLetter::R2IR2I, WLetter::R2IRI];

    pub fn word(self) -> GroupWord {
        use Letter::*;
        GroupWord(match self {
            WLetter::RIRI => vec![R, I, R, I],
            WLetter::RIR2I => vec![R, I, R2, I],
            WLetter::R2IR2I => vec![R2, I, R2, I],
            WLetter::R2IRI => vec![R2, I, R, I],
        })
    }

    pub fn index(self) -> usize {
        self as usize
    }

    fn from_blocks(a: Letter, b: Letter) -> WLetter {
        match (a, b) {
            (Letter::R, Letter::R) => WLetter::RIRI,
            (Letter::R, Letter::R2) => WLetter::RIR2I,
            (Letter::R2, Letter::R2) => WLetter::R2IR2I,
            _ => WLetter::R2IRI,
        }
    }
}

/// Word of a sequence of crossing letters.
pub fn w_word(steps: &[WLetter]) -> GroupWord {
    let mut v = Vec::with_capacity(4 * steps.len());
    for s in steps {
        v.extend(s.word().0);
    }
    GroupWord(v).normalize()
}

/// Crossing combinatorics of a periodic word: `target = base * w_1 ... w_k * base^{-1}`
/// with each `w_i` a crossing letter; `steps` repeats the period.
#[derive(Clone, Debug, Serialize)]
pub struct CrossingSequence {
    pub base: GroupWord,
    pub period: Vec<WLetter>,
    pub steps: Vec<WLetter>,
}

impl CrossingSequence {
    /// Partial products `base * w_1 ... w_n` for `n = 0..=steps.len()`.
    pub fn partial_products(&self) -> Vec<GroupWord> {
        let mut out = vec![self.base.clone()];
        let mut g = self.base.clone();
        for s in &self.steps {
            g = g.mul(&s.word());
            out.push(g.clone());
        }
        out
    }
}

pub fn crossing_sequence(target: &GroupWord, n: usize) -> Result<CrossingSequence> {
    let target = target.normalize();
    if !target.in_subgroup_o()? {
        return Err(Error::NotInSubgroupO);
    }
    let (mut base, mut core) = target.cyclic_reduce();
    if core.i_count() == 0 {
        return Err(Error::NonLoxodromic);
    }
    // Rotate so the core starts with a rotation block and the conjugator has
    // an even number of I's; rotating by (block, I) flips only the parity.
    fn rotate(k: usize, base: &mut GroupWord, core: &mut GroupWord) {
        let head = GroupWord(core.0[..k].to_vec());
        let mut v = core.0[k..].to_vec();
        v.extend_from_slice(&head.0);
        *core = GroupWord(v);
        *base = base.mul(&head);
    }
    if core.0[0] == Letter::I {
        rotate(1, &mut base, &mut core);
    }
    if base.i_count() % 2 == 1 {
        rotate(2, &mut base, &mut core);
    }
    debug_assert!(core.len() % 4 == 0);
    let period: Vec<WLetter> = core.0.chunks(4).map(|c| WLetter::from_blocks(c[0], c[2])).collect();
    let steps = (0..n).map(|k| period[k % period.len()]).collect();
    Ok(CrossingSequence { base, period, steps })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> GroupWord {
        GroupWord::parse(s).unwrap()
    }

    fn edge(t: (i64, i64), h: (i64, i64)) -> FareyGeodesic {
        FareyGeodesic::new(Cusp::new(t.0, t.1).unwrap(), Cusp::new(h.0, h.1).unwrap()).unwrap()
    }

    #[test]
    fn normal_form_examples() {
        assert!(w("I I").normalize().is_empty());
        assert!(w("R R R").normalize().is_empty());
        assert_eq!(w("T1 I T2").normalize(), w("I"));
        assert_eq!(w("R R").normalize(), w("Rr"));
        assert_eq!(w("IRRIRRR").normalize(), w("I Rr I"));
    }

    #[test]
    fn subgroup_membership() {
        assert!(w("R").in_subgroup_o().unwrap());
        assert!(!w("I").in_subgroup_o().unwrap());
        assert!(w("IRI").in_subgroup_o().unwrap());
        assert_eq!(w("R").trace(), -1);
    }

    #[test]
    fn star_action_examples() {
        let e0 = FareyGeodesic::e0();
        assert_eq!(e0.star(&w("I")), edge((0, 1), (1, 0)));
        assert_eq!(e0.star(&w("R")), edge((1, 1), (1, 0)));
        assert_eq!(e0.star(&w("T1")), edge((1, 0), (1, 1)));
        assert_eq!(e0.star(&w("R")), e0.mobius(&w("R")));
        assert_eq!(e0.star(&w("I")), e0.mobius(&w("I")));
    }

    #[test]
    fn mobius_action_examples() {
        let e0 = FareyGeodesic::e0();
        assert_eq!(e0.mobius(&w("R")), edge((1, 1), (1, 0)));
        assert_eq!(e0.mobius(&GroupWord::empty()), e0);
    }

    #[test]
    fn label_examples() {
        assert_eq!(label_word(&FareyGeodesic::e0()), GroupWord::empty());
        assert_eq!(label_word(&edge((1, 0), (1, 1))), GroupWord::t1());
        assert_eq!(label_word(&edge((0, 1), (1, 0))), w("I"));
    }

    #[test]
    fn crossing_letter_nests() {
        let e0 = FareyGeodesic::e0();
        let e = e0.mobius(&WLetter::RIRI.word());
        assert_eq!(e, edge((1, 0), (2, 1)));
        assert!(e0.half_plane_contains(&e));
        assert!(!e.half_plane_contains(&e0));
    }

    #[test]
    fn crossing_sequence_examples() {
        let c = crossing_sequence(&WLetter::RIRI.word(), 5).unwrap();
        assert!(c.steps.iter().all(|&s| s == WLetter::RIRI));
        let c = crossing_sequence(&WLetter::R2IRI.word(), 3).unwrap();
        assert!(c.steps.iter().all(|&s| s == WLetter::R2IRI));
        let c = crossing_sequence(&w_word(&[WLetter::RIRI, WLetter::R2IR2I]), 4).unwrap();
        assert_eq!(c.steps, vec![WLetter::RIRI, WLetter::R2IR2I, WLetter::RIRI, WLetter::R2IR2I]);
        assert_eq!(crossing_sequence(&w("I"), 3).unwrap_err(), Error::NotInSubgroupO);
        assert_eq!(crossing_sequence(&w("IRI"), 3).unwrap_err(), Error::NonLoxodromic);
    }

    #[test]
    fn conjugated_target_recovers_base() {
        let g = w_word(&[WLetter::RIR2I, WLetter::R2IRI]);
        let h = w("I R");
        let target = h.mul(&g).mul(&h.inverse());
        let c = crossing_sequence(&target, 2).unwrap();
        let rebuilt = c.base.mul(&w_word(&c.period)).mul(&c.base.inverse());
        assert_eq!(rebuilt, target);
    }
}
