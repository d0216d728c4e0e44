//! Resolvable (v,k,1) designs for k in {2, 3}.
//!
//! k = 2 is a one-factorization of K_v. For k = 3 (Kirkman triple systems)
//! the orders 15 and 21 come from bundled solutions, powers of 3 from the
//! lines of AG(d,3), and other admissible orders up to the search cap from a
//! deterministic backtracking search under a node budget. Every result is
//! revalidated before it is returned.

use super::{one_factorization, ClassicalError};
use crate::design::{validate_pbd, verify_resolution, Design, Resolution};

/// Largest order the Kirkman search is attempted for by default.
pub const KIRKMAN_SEARCH_CAP: usize = 27;

/// Orders above this never reach the search (pair masks are 64-bit).
pub const MAX_SEARCH_ORDER: usize = 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResolvableOptions {
    pub search_cap: usize,
    pub node_budget: u64,
}

impl Default for ResolvableOptions {
    fn default() -> Self {
        Self { search_cap: KIRKMAN_SEARCH_CAP, node_budget: 50_000_000 }
    }
}

/// KTS(9): the lines of AG(2,3) grouped by direction.
const KTS9: [[[usize; 3]; 3]; 4] = [
    [[0, 1, 2], [3, 4, 5], [6, 7, 8]],
    [[0, 3, 6], [1, 4, 7], [2, 5, 8]],
    [[0, 4, 8], [1, 5, 6], [2, 3, 7]],
    [[0, 5, 7], [1, 3, 8], [2, 4, 6]],
];

/// KTS(15), a solution of the schoolgirl problem.
const KTS15: [[[usize; 3]; 5]; 7] = [
    [[0, 1, 2], [3, 4, 5], [6, 7, 8], [9, 10, 11], [12, 13, 14]],
    [[0, 3, 6], [1, 4, 7], [2, 9, 12], [5, 10, 13], [8, 11, 14]],
    [[0, 4, 9], [1, 5, 11], [2, 7, 14], [3, 8, 13], [6, 10, 12]],
    [[0, 5, 14], [1, 3, 12], [2, 6, 11], [4, 8, 10], [7, 9, 13]],
    [[0, 7, 10], [1, 6, 13], [2, 5, 8], [3, 9, 14], [4, 11, 12]],
    [[0, 8, 12], [1, 10, 14], [2, 4, 13], [3, 7, 11], [5, 6, 9]],
    [[0, 11, 13], [1, 8, 9], [2, 3, 10], [4, 6, 14], [5, 7, 12]],
];

/// KTS(21) on Z_7 x {0,1,2} (point `7i + x`) with Z_7 acting on `x`. Each
/// transversal base triple `{(0,0), (b,1), (c,2)}` develops into a fixed
/// class; the base class develops into the remaining seven.
const KTS21_TRANSVERSALS: [(usize, usize); 3] = [(0, 0), (1, 2), (2, 5)];
const KTS21_BASE_CLASS: [[usize; 3]; 7] =
    [[0, 1, 3], [2, 7, 20], [4, 8, 17], [5, 11, 15], [6, 9, 14], [10, 12, 13], [16, 18, 19]];

fn kts21() -> Result<(Design, Resolution), ClassicalError> {
    let shift = |p: usize, s: usize| 7 * (p / 7) + (p % 7 + s) % 7;
    let mut classes: Vec<Vec<Vec<usize>>> = KTS21_TRANSVERSALS
        .iter()
        .map(|&(b, c)| (0..7).map(|s| vec![shift(0, s), shift(7 + b, s), shift(14 + c, s)]).collect())
        .collect();
    for s in 0..7 {
        classes.push(KTS21_BASE_CLASS.iter().map(|t| t.iter().map(|&p| shift(p, s)).collect()).collect());
    }
    Ok(Design::from_classes(21, classes)?)
}

/// Lines of AG(d,3) grouped by direction; point index is the base-3 number
/// with coordinate 0 least significant.
fn affine_space_over_f3(d: u32) -> Result<(Design, Resolution), ClassicalError> {
    let v = 3usize.pow(d);
    let digits = |p: usize| (0..d).map(|i| (p / 3usize.pow(i)) % 3).collect::<Vec<_>>();
    let add = |p: usize, u: usize| {
        let (a, b) = (digits(p), digits(u));
        (0..d as usize).map(|i| ((a[i] + b[i]) % 3) * 3usize.pow(i as u32)).sum::<usize>()
    };
    let mut classes = Vec::new();
    for u in 1..v {
        // one representative per direction: leading nonzero coordinate is 1
        let du = digits(u);
        if du.iter().rev().find(|&&x| x != 0) != Some(&1) {
            continue;
        }
        let mut seen = vec![false; v];
        let mut class = Vec::new();
        for p in 0..v {
            if seen[p] {
                continue;
            }
            let q = add(p, u);
            let r = add(q, u);
            for x in [p, q, r] {
                seen[x] = true;
            }
            class.push(vec![p, q, r]);
        }
        classes.push(class);
    }
    Ok(Design::from_classes(v, classes)?)
}

fn power_of_three(v: usize) -> Option<u32> {
    let mut d = 0;
    let mut x = v;
    while x > 1 && x.is_multiple_of(3) {
        x /= 3;
        d += 1;
    }
    (x == 1 && d >= 2).then_some(d)
}

fn from_fixture<const B: usize>(v: usize, classes: &[[[usize; 3]; B]]) -> Result<(Design, Resolution), ClassicalError> {
    let classes = classes.iter().map(|class| class.iter().map(|t| t.to_vec()).collect()).collect();
    Ok(Design::from_classes(v, classes)?)
}

/// A resolvable (v,k,1)-BIBD with its `(v-1)/(k-1)` parallel classes.
pub fn resolvable_design(
    v: usize,
    k: usize,
    options: ResolvableOptions,
) -> Result<(Design, Resolution), ClassicalError> {
    if k != 2 && k != 3 {
        return Err(ClassicalError::UnsupportedK(k));
    }
    if v < k || !v.is_multiple_of(k) || !(v - 1).is_multiple_of(k - 1) {
        return Err(ClassicalError::CongruenceFailure { v, k });
    }
    let (design, resolution) = if k == 2 {
        one_factorization(v)?.to_design()?
    } else {
        match v {
            3 => Design::from_classes(3, vec![vec![vec![0, 1, 2]]])?,
            9 => from_fixture(9, &KTS9)?,
            15 => from_fixture(15, &KTS15)?,
            21 => kts21()?,
            _ if power_of_three(v).is_some() => affine_space_over_f3(power_of_three(v).unwrap())?,
            _ if v <= options.search_cap.min(MAX_SEARCH_ORDER) => kirkman_search(v, options.node_budget)?,
            _ => return Err(ClassicalError::SearchExhausted { v, nodes: 0 }),
        }
    };
    let expected_classes = (v - 1) / (k - 1);
    assert!(
        validate_pbd(&design).ok
            && verify_resolution(&design, &resolution)
            && resolution.classes.len() == expected_classes,
        "resolvable ({v},{k},1) design failed revalidation"
    );
    Ok((design, resolution))
}

struct KirkmanSearch {
    v: usize,
    classes: usize,
    budget: u64,
    nodes: u64,
    /// `used[x]` has bit `y` set when the pair {x, y} is already covered.
    used: Vec<u64>,
    triples: Vec<Vec<[usize; 3]>>,
}

impl KirkmanSearch {
    fn place(&mut self, t: [usize; 3]) {
        let [a, b, c] = t;
        self.used[a] |= (1u64 << b) | (1u64 << c);
        self.used[b] |= (1u64 << a) | (1u64 << c);
        self.used[c] |= (1u64 << a) | (1u64 << b);
    }

    fn unplace(&mut self, t: [usize; 3]) {
        let [a, b, c] = t;
        self.used[a] &= !((1u64 << b) | (1u64 << c));
        self.used[b] &= !((1u64 << a) | (1u64 << c));
        self.used[c] &= !((1u64 << a) | (1u64 << b));
    }

    /// Number of triples `{w, y, z}` that can still be placed among `free`.
    fn completions(&self, w: usize, free: u64) -> u32 {
        let cand = free & !(1u64 << w) & !self.used[w];
        let mut ys = cand;
        let mut count = 0;
        while ys != 0 {
            let y = ys.trailing_zeros() as usize;
            ys &= ys - 1;
            count += (cand & !self.used[y] & !((2u64 << y) - 1)).count_ones();
        }
        count
    }

    /// Fills class `class` from the points in `free`. Returns `None` when the
    /// budget runs out.
    fn fill(&mut self, class: usize, free: u64) -> Option<bool> {
        if class == self.classes {
            return Some(true);
        }
        if free == 0 {
            let all = (1u64 << self.v) - 1;
            return self.fill(class + 1, all);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        // branch on the free point with the fewest completions, except that
        // point 0 always opens a class
        let mut x = free.trailing_zeros() as usize;
        if x != 0 || free.count_ones() < self.v as u32 {
            let mut best = u32::MAX;
            let mut scan = free;
            while scan != 0 {
                let w = scan.trailing_zeros() as usize;
                scan &= scan - 1;
                let options = self.completions(w, free);
                if options == 0 {
                    return Some(false);
                }
                if options < best {
                    best = options;
                    x = w;
                }
            }
        }
        let rest = free & !(1u64 << x);
        let candidates = rest & !self.used[x];
        let mut ys = candidates;
        if x == 0 {
            // classes are ordered by the smallest partner of point 0
            let unused = ((1u64 << self.v) - 1) & !1 & !self.used[0];
            if unused == 0 {
                return Some(false);
            }
            ys &= 1u64 << unused.trailing_zeros();
        }
        while ys != 0 {
            let y = ys.trailing_zeros() as usize;
            ys &= ys - 1;
            let mut zs = candidates & !self.used[y] & !((2u64 << y) - 1);
            while zs != 0 {
                let z = zs.trailing_zeros() as usize;
                zs &= zs - 1;
                let t = [x, y, z];
                self.place(t);
                self.triples[class].push(t);
                let next = rest & !(1u64 << y) & !(1u64 << z);
                match self.fill(class, next) {
                    Some(true) => return Some(true),
                    None => return None,
                    Some(false) => {}
                }
                self.triples[class].pop();
                self.unplace(t);
            }
        }
        Some(false)
    }
}

fn kirkman_search(v: usize, budget: u64) -> Result<(Design, Resolution), ClassicalError> {
    let classes = (v - 1) / 2;
    let mut search =
        KirkmanSearch { v, classes, budget, nodes: 0, used: vec![0; v], triples: vec![Vec::new(); classes] };
    // the first class can always be relabelled to consecutive triples
    for i in 0..v / 3 {
        let t = [3 * i, 3 * i + 1, 3 * i + 2];
        search.place(t);
        search.triples[0].push(t);
    }
    let all = (1u64 << v) - 1;
    match search.fill(1, all) {
        Some(true) => {
            let classes = search.triples.into_iter().map(|c| c.into_iter().map(|t| t.to_vec()).collect()).collect();
            Ok(Design::from_classes(v, classes)?)
        }
        _ => Err(ClassicalError::SearchExhausted { v, nodes: search.nodes }),
    }
}
