//! Spectral sequence of the Borel fibration `X -> X_G -> B_G` with
//! `E_2 = F[t] (x) H*(X)`, `deg t = d+1`, fiber classes `1, x, y, xy`.
//!
//! Pages are computed cell by cell as subquotients `Z_r / B_r` of the E_2 cell,
//! so the n = m case (two classes in one cell) needs no special treatment.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{parse_relation, Generator, GradedDims, Presentation};
use crate::field::{int, scalar_str, FieldTag, Matrix, Scalar, Subspace};
use crate::gysin::validate_dnm;
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FiberClass {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "x")]
    X,
    #[serde(rename = "y")]
    Y,
    #[serde(rename = "xy")]
    XY,
}

impl FiberClass {
    pub fn degree(self, n: u32, m: u32) -> u32 {
        match self {
            FiberClass::One => 0,
            FiberClass::X => n,
            FiberClass::Y => m,
            FiberClass::XY => n + m,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            FiberClass::One => "1",
            FiberClass::X => "x",
            FiberClass::Y => "y",
            FiberClass::XY => "xy",
        }
    }
}

/// Product in `H*(X) = F[x,y]/(x^2, y^2)`: `None` if zero, else (negative?, class).
pub fn fiber_mul(a: FiberClass, b: FiberClass, n: u32, m: u32) -> Option<(bool, FiberClass)> {
    use FiberClass::*;
    match (a, b) {
        (One, c) | (c, One) => Some((false, c)),
        (X, Y) => Some((false, XY)),
        (Y, X) => Some(((n * m) % 2 == 1, XY)),
        _ => None,
    }
}

/// Rows of the page and the fiber classes spanning each.
#[derive(Clone, Debug)]
struct Layout {
    n: u32,
    m: u32,
    rows: BTreeMap<u32, Vec<FiberClass>>,
}

impl Layout {
    fn new(n: u32, m: u32) -> Self {
        use FiberClass::*;
        let mut rows = BTreeMap::new();
        rows.insert(0, vec![One]);
        if n == m {
            rows.insert(n, vec![X, Y]);
        } else {
            rows.insert(n, vec![X]);
            rows.insert(m, vec![Y]);
        }
        rows.insert(n + m, vec![XY]);
        Layout { n, m, rows }
    }

    fn dim(&self, l: u32) -> usize {
        self.rows.get(&l).map_or(0, Vec::len)
    }

    fn position(&self, f: FiberClass) -> (u32, usize) {
        let l = f.degree(self.n, self.m);
        (l, self.rows[&l].iter().position(|&g| g == f).expect("class in its row"))
    }

    fn unit(&self, f: FiberClass, field: FieldTag) -> Vec<Scalar> {
        let (l, i) = self.position(f);
        let _ = field;
        (0..self.dim(l)).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberTerm {
    pub class: FiberClass,
    #[serde(with = "scalar_str")]
    pub coeff: Scalar,
}

/// `t^t_power (x) (sum of fiber terms)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisElement {
    pub t_power: u32,
    pub fiber: Vec<FiberTerm>,
}

impl BasisElement {
    pub fn render(&self) -> String {
        let fiber: Vec<String> = self
            .fiber
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let c = crate::field::fmt_scalar(&t.coeff);
                let body = if t.coeff == int(1) {
                    t.class.label().to_string()
                } else if t.coeff == int(-1) {
                    format!("-{}", t.class.label())
                } else {
                    format!("{c}{}", t.class.label())
                };
                if i > 0 && !body.starts_with('-') {
                    format!("+{body}")
                } else {
                    body
                }
            })
            .collect();
        let fiber = fiber.join("");
        let fiber = if self.fiber.len() > 1 { format!("({fiber})") } else { fiber };
        match self.t_power {
            0 => format!("1⊗{fiber}"),
            1 => format!("t⊗{fiber}"),
            p => format!("t^{p}⊗{fiber}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageEntry {
    pub k: u32,
    pub l: u32,
    pub basis: Vec<BasisElement>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiGradedPage {
    pub r: u32,
    pub d: u32,
    pub n: u32,
    pub m: u32,
    pub field: FieldTag,
    pub k_max: u32,
    pub entries: Vec<PageEntry>,
}

impl BiGradedPage {
    pub fn dim(&self, k: u32, l: u32) -> usize {
        self.entries.iter().find(|e| e.k == k && e.l == l).map_or(0, |e| e.basis.len())
    }
}

fn vector_element(layout: &Layout, l: u32, p: u32, v: &[Scalar]) -> BasisElement {
    let fiber = layout.rows[&l]
        .iter()
        .zip(v)
        .filter(|(_, c)| !c.is_zero())
        .map(|(&class, c)| FiberTerm { class, coeff: c.clone() })
        .collect();
    BasisElement { t_power: p, fiber }
}

pub fn build_e2(d: u32, n: u32, m: u32, field: FieldTag) -> Result<BiGradedPage, Error> {
    validate_dnm(d, n, m)?;
    let layout = Layout::new(n, m);
    let k_max = n + m + d + 1;
    let mut entries = Vec::new();
    for p in 0..=k_max / (d + 1) {
        for (&l, classes) in &layout.rows {
            let basis = classes
                .iter()
                .map(|&class| BasisElement { t_power: p, fiber: vec![FiberTerm { class, coeff: int(1) }] })
                .collect();
            entries.push(PageEntry { k: p * (d + 1), l, basis });
        }
    }
    Ok(BiGradedPage { r: 2, d, n, m, field, k_max, entries })
}

/// `d_page(1 (x) source) = c * t^target_t_power (x) target`, with `c` a nonzero
/// scalar named `coefficient`. Computations use `c = 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Transgression {
    pub source: FiberClass,
    pub page: u32,
    pub target_t_power: u32,
    pub target: FiberClass,
    pub coefficient: String,
}

/// Value of `d_r(1 (x) xy)` forced by the Leibniz rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InducedDifferential {
    pub page: u32,
    pub value: Vec<BasisElement>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentialChoice {
    pub transgressions: Vec<Transgression>,
    pub induced_xy: Vec<InducedDifferential>,
}

impl DifferentialChoice {
    pub fn render(&self) -> String {
        let mut parts: Vec<String> = self
            .transgressions
            .iter()
            .map(|t| {
                let target = BasisElement {
                    t_power: t.target_t_power,
                    fiber: vec![FiberTerm { class: t.target, coeff: int(1) }],
                };
                format!("d_{}(1⊗{}) = {}·{}", t.page, t.source.label(), t.coefficient, target.render())
            })
            .collect();
        for ind in &self.induced_xy {
            let v: Vec<String> = ind.value.iter().map(BasisElement::render).collect();
            parts.push(format!("d_{}(1⊗xy) = {} (Leibniz)", ind.page, if v.is_empty() { "0".into() } else { v.join(" + ") }));
        }
        parts.join("; ")
    }
}

/// Leibniz value of `d(1 (x) xy)` from `d(1 (x) x)` and `d(1 (x) y)`, as
/// (t-power, fiber class, coefficient) triples: `d(x)·y + (-1)^n x·d(y)`.
pub fn leibniz_xy(
    dx: &[(u32, FiberClass, Scalar)],
    dy: &[(u32, FiberClass, Scalar)],
    n: u32,
    m: u32,
    field: FieldTag,
) -> Vec<(u32, FiberClass, Scalar)> {
    let mut out: Vec<(u32, FiberClass, Scalar)> = Vec::new();
    let mut push = |s: u32, f: FiberClass, c: Scalar| {
        if let Some(e) = out.iter_mut().find(|e| e.0 == s && e.1 == f) {
            e.2 = field.add(&e.2, &c);
        } else {
            out.push((s, f, field.reduce(c)));
        }
    };
    for (s, tgt, c) in dx {
        if let Some((neg, f)) = fiber_mul(*tgt, FiberClass::Y, n, m) {
            push(*s, f, if neg { -c.clone() } else { c.clone() });
        }
    }
    let sign = if n % 2 == 1 { int(-1) } else { int(1) };
    for (s, tgt, c) in dy {
        if let Some((neg, f)) = fiber_mul(FiberClass::X, *tgt, n, m) {
            let c = c * &sign;
            push(*s, f, if neg { -c } else { c });
        }
    }
    out.retain(|e| !e.2.is_zero());
    out
}

/// Cycles and boundaries in every cell, keyed by (t-power, fiber row).
#[derive(Clone, Debug)]
struct Cells {
    z: BTreeMap<(u32, u32), Subspace>,
    b: BTreeMap<(u32, u32), Subspace>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankEntry {
    pub page: u32,
    pub from: (u32, u32),
    pub to: (u32, u32),
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermanentCocycle {
    pub k: u32,
    pub l: u32,
    pub element: BasisElement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EInfData {
    pub d: u32,
    pub n: u32,
    pub m: u32,
    pub field: FieldTag,
    pub choice: DifferentialChoice,
    pub page: BiGradedPage,
    pub total: GradedDims,
    pub permanent_cocycles: Vec<PermanentCocycle>,
    /// Euler characteristic of the whole working page before each page turn and at the end.
    pub euler_by_page: Vec<(u32, i64)>,
    /// Ranks of the induced differentials, cells given as (k, l).
    pub ranks: Vec<RankEntry>,
    /// Lowest total degree above n+m carrying a surviving class, if any.
    pub first_violation: Option<u32>,
}

impl EInfData {
    pub fn is_free(&self) -> bool {
        self.first_violation.is_none()
    }

    /// Total dimensions recomputed as E_2 dimensions minus the ranks of every
    /// differential entering or leaving each cell.
    pub fn total_from_ranks(&self) -> GradedDims {
        let layout = Layout::new(self.n, self.m);
        let mut cells: BTreeMap<(u32, u32), i64> = BTreeMap::new();
        for p in 0..=self.page.k_max / (self.d + 1) {
            for &l in layout.rows.keys() {
                cells.insert((p * (self.d + 1), l), layout.dim(l) as i64);
            }
        }
        for r in &self.ranks {
            for key in [r.from, r.to] {
                if let Some(v) = cells.get_mut(&key) {
                    *v -= r.rank as i64;
                }
            }
        }
        let mut total = GradedDims::new(self.page.k_max);
        for ((k, l), v) in cells {
            if k + l <= self.page.k_max {
                total.add(k + l, v as usize);
            }
        }
        total
    }
}

struct Engine<'a> {
    field: FieldTag,
    d: u32,
    n: u32,
    m: u32,
    layout: Layout,
    p_max: u32,
    choice: &'a [Transgression],
}

#[allow(dead_code)] // payloads only show up in Debug output
#[derive(Debug)]
enum Inadmissible {
    DeadGenerator(FiberClass),
    TrivialImage(FiberClass),
    NotAComplex(u32),
    LeibnizOverride,
    SquareObstruction(FiberClass),
}

impl<'a> Engine<'a> {
    fn new(d: u32, n: u32, m: u32, field: FieldTag, choice: &'a [Transgression]) -> Self {
        // Cells with k <= n+m+d+1 are exact once every differential out of and
        // into them stays inside the working range.
        let k_work = 2 * (n + m + 1) + d;
        Engine { field, d, n, m, layout: Layout::new(n, m), p_max: k_work / (d + 1), choice }
    }

    fn initial(&self) -> Cells {
        let mut z = BTreeMap::new();
        let mut b = BTreeMap::new();
        for p in 0..=self.p_max {
            for &l in self.layout.rows.keys() {
                let dim = self.layout.dim(l);
                z.insert((p, l), Subspace::full(self.field, dim));
                b.insert((p, l), Subspace::zero(self.field, dim));
            }
        }
        Cells { z, b }
    }

    fn assigned(&self, source: FiberClass, page: u32) -> Option<&Transgression> {
        self.choice.iter().find(|t| t.source == source && t.page == page)
    }

    fn alive(&self, cells: &Cells, f: FiberClass) -> bool {
        let (l, _) = self.layout.position(f);
        cells.z[&(0, l)].contains(&self.layout.unit(f, self.field))
    }

    /// `d_r(1 (x) f)` as (t-power, class, coefficient) triples.
    fn image_of(&self, r: u32, f: FiberClass, both_alive: bool) -> Vec<(u32, FiberClass, Scalar)> {
        if let Some(t) = self.assigned(f, r) {
            return vec![(t.target_t_power, t.target, int(1))];
        }
        if f == FiberClass::XY && both_alive {
            let dx = self.image_of(r, FiberClass::X, false);
            let dy = self.image_of(r, FiberClass::Y, false);
            return leibniz_xy(&dx, &dy, self.n, self.m, self.field);
        }
        Vec::new()
    }

    /// Matrix of `d_r` out of row `l`, with its target row, if the target row exists.
    fn matrix(&self, r: u32, l: u32, both_alive: bool) -> Option<(u32, Matrix)> {
        let target = (l + 1).checked_sub(r)?;
        let tdim = self.layout.dim(target);
        if tdim == 0 || r < 2 {
            return None;
        }
        let sources = &self.layout.rows[&l];
        let mut mat = Matrix::zero(tdim, sources.len());
        for (j, &f) in sources.iter().enumerate() {
            for (_, g, c) in self.image_of(r, f, both_alive) {
                let (gl, gi) = self.layout.position(g);
                debug_assert_eq!(gl, target);
                mat.data[gi][j] = self.field.add(&mat.data[gi][j], &c);
            }
        }
        Some((target, mat))
    }

    /// Runs one page; returns the next cells and the ranks of the induced maps.
    fn turn(&self, r: u32, cells: &Cells) -> Result<(Cells, Vec<RankEntry>), Inadmissible> {
        let f = self.field;
        let shift = r / (self.d + 1);
        let x_alive = self.alive(cells, FiberClass::X);
        let y_alive = self.alive(cells, FiberClass::Y);
        let both = x_alive && y_alive;

        for t in self.choice.iter().filter(|t| t.page == r) {
            if t.source == FiberClass::XY && both {
                return Err(Inadmissible::LeibnizOverride);
            }
            if !self.alive(cells, t.source) {
                return Err(Inadmissible::DeadGenerator(t.source));
            }
            let (tl, ti) = self.layout.position(t.target);
            let mut v = vec![Scalar::zero(); self.layout.dim(tl)];
            v[ti] = int(1);
            if cells.b[&(t.target_t_power, tl)].contains(&v) {
                return Err(Inadmissible::TrivialImage(t.source));
            }
            // d(g^2) = d(g)·g + (-1)^|g| g·d(g) must vanish on this page, since g^2 = 0.
            if t.source != FiberClass::XY {
                let g = t.source;
                let gd = g.degree(self.n, self.m);
                if let (Some((n1, p1)), Some((n2, p2))) =
                    (fiber_mul(t.target, g, self.n, self.m), fiber_mul(g, t.target, self.n, self.m))
                {
                    debug_assert_eq!(p1, p2);
                    let a = if n1 { int(-1) } else { int(1) };
                    let mut b = if n2 { int(-1) } else { int(1) };
                    if gd % 2 == 1 {
                        b = -b;
                    }
                    let coeff = f.reduce(a + b);
                    if !coeff.is_zero() {
                        let (pl, pi) = self.layout.position(p1);
                        let mut w = vec![Scalar::zero(); self.layout.dim(pl)];
                        w[pi] = coeff;
                        if !cells.b[&(t.target_t_power, pl)].contains(&w) {
                            return Err(Inadmissible::SquareObstruction(g));
                        }
                    }
                }
            }
        }

        let mut next = cells.clone();
        let mut ranks = Vec::new();
        let maps: BTreeMap<u32, (u32, Matrix)> = self
            .layout
            .rows
            .keys()
            .filter_map(|&l| self.matrix(r, l, both).map(|m| (l, m)))
            .collect();
        for (&l, (tl, mat)) in &maps {
            for p in 0..=self.p_max {
                let tp = p + shift;
                if tp > self.p_max {
                    continue;
                }
                let z = &cells.z[&(p, l)];
                let image = z.image(mat);
                if !cells.z[&(tp, *tl)].contains_space(&image) || !cells.b[&(tp, *tl)].contains_space(&cells.b[&(p, l)].image(mat)) {
                    return Err(Inadmissible::NotAComplex(r));
                }
                if let Some((ttl, mat2)) = maps.get(tl) {
                    if tp + shift <= self.p_max && !cells.b[&(tp + shift, *ttl)].contains_space(&image.image(mat2)) {
                        return Err(Inadmissible::NotAComplex(r));
                    }
                }
                let target_b = &cells.b[&(tp, *tl)];
                next.z.insert((p, l), z.preimage_within(mat, target_b));
                let grown = target_b.sum(&image);
                let rank = grown.dim() - target_b.dim();
                if rank > 0 {
                    ranks.push(RankEntry {
                        page: r,
                        from: (p * (self.d + 1), l),
                        to: (tp * (self.d + 1), *tl),
                        rank,
                    });
                }
                let nb = next.b[&(tp, *tl)].sum(&image);
                next.b.insert((tp, *tl), nb);
            }
        }
        Ok((next, ranks))
    }

    fn pages(&self) -> Vec<u32> {
        let mut pages: Vec<u32> = self.choice.iter().map(|t| t.page).collect();
        pages.sort_unstable();
        pages.dedup();
        pages
    }

    fn euler(&self, cells: &Cells) -> i64 {
        cells
            .z
            .iter()
            .map(|(&(p, l), z)| {
                let dim = (z.dim() - cells.b[&(p, l)].dim()) as i64;
                if (p * (self.d + 1) + l).is_multiple_of(2) {
                    dim
                } else {
                    -dim
                }
            })
            .sum()
    }

    /// Runs every page; also returns the Leibniz values used on xy.
    fn run(&self) -> Result<(Cells, Vec<RankEntry>, Vec<(u32, i64)>, Vec<InducedDifferential>), Inadmissible> {
        let mut cells = self.initial();
        let mut ranks = Vec::new();
        let mut euler = Vec::new();
        let mut induced = Vec::new();
        for r in self.pages() {
            euler.push((r, self.euler(&cells)));
            let both = self.alive(&cells, FiberClass::X) && self.alive(&cells, FiberClass::Y);
            if both && self.assigned(FiberClass::XY, r).is_none() {
                let value = self.image_of(r, FiberClass::XY, true);
                if !value.is_empty() {
                    let (tl, _) = self.layout.position(value[0].1);
                    let mut v = vec![Scalar::zero(); self.layout.dim(tl)];
                    for (_, g, c) in &value {
                        v[self.layout.position(*g).1] = c.clone();
                    }
                    induced.push(InducedDifferential { page: r, value: vec![vector_element(&self.layout, tl, value[0].0, &v)] });
                }
            }
            let (next, rk) = self.turn(r, &cells)?;
            cells = next;
            ranks.extend(rk);
        }
        euler.push((u32::MAX, self.euler(&cells)));
        Ok((cells, ranks, euler, induced))
    }
}

fn candidate_options(d: u32, n: u32, m: u32) -> [Vec<Option<Transgression>>; 3] {
    use FiberClass::*;
    let period = d + 1;
    let mk = |source, page: u32, target, name: &str| Transgression {
        source,
        page,
        target_t_power: page / period,
        target,
        coefficient: name.to_string(),
    };
    let mut x = vec![None];
    if (n + 1).is_multiple_of(period) {
        x.push(Some(mk(X, n + 1, One, "c")));
    }
    let mut y = vec![None];
    if (m + 1).is_multiple_of(period) {
        y.push(Some(mk(Y, m + 1, One, "d")));
    }
    if m > n && (m - n + 1).is_multiple_of(period) {
        y.push(Some(mk(Y, m - n + 1, X, "d")));
    }
    let mut xy = vec![None];
    if (n + m + 1).is_multiple_of(period) {
        xy.push(Some(mk(XY, n + m + 1, One, "e")));
    }
    [x, y, xy]
}

/// Every nonzero transgression pattern on x, y, xy that is consistent page by
/// page. The all-zero pattern is left out: it never gives a free action.
pub fn enumerate_differentials(page: &BiGradedPage) -> Vec<DifferentialChoice> {
    let [xs, ys, xys] = candidate_options(page.d, page.n, page.m);
    let mut out = Vec::new();
    for x in &xs {
        for y in &ys {
            for xy in &xys {
                let transgressions: Vec<Transgression> = [x, y, xy].into_iter().flatten().cloned().collect();
                if transgressions.is_empty() {
                    continue;
                }
                let engine = Engine::new(page.d, page.n, page.m, page.field, &transgressions);
                if let Ok((_, _, _, induced_xy)) = engine.run() {
                    out.push(DifferentialChoice { transgressions, induced_xy });
                }
            }
        }
    }
    out
}

/// Runs every page without judging freeness.
pub fn run_pages(page: &BiGradedPage, choice: &DifferentialChoice) -> Result<EInfData, Error> {
    let (d, n, m) = (page.d, page.n, page.m);
    let engine = Engine::new(d, n, m, page.field, &choice.transgressions);
    let (cells, ranks, euler_by_page, _) = engine
        .run()
        .map_err(|e| Error::InvalidInput(format!("differential choice is not admissible: {e:?}")))?;
    let k_max = page.k_max;
    let period = d + 1;
    let layout = &engine.layout;
    let mut entries = Vec::new();
    let mut total = GradedDims::new(k_max);
    let mut first_violation: Option<u32> = None;
    let mut cocycles = Vec::new();
    for p in 0..=k_max / period {
        for &l in layout.rows.keys() {
            let z = &cells.z[&(p, l)];
            let b = &cells.b[&(p, l)];
            let reps = z.complement_of(b);
            let k = p * period;
            if !reps.is_empty() {
                if k + l <= k_max {
                    total.add(k + l, reps.len());
                }
                if k + l > n + m {
                    first_violation = Some(first_violation.map_or(k + l, |v| v.min(k + l)));
                }
            }
            // module generators of each positive row, plus u = t (x) 1
            if l > 0 {
                let lower = if p == 0 { b.clone() } else { b.sum(&cells.z[&(p - 1, l)]) };
                for v in z.complement_of(&lower) {
                    cocycles.push(PermanentCocycle { k, l, element: vector_element(layout, l, p, &v) });
                }
            } else if p == 1 && !reps.is_empty() {
                cocycles.push(PermanentCocycle { k, l, element: vector_element(layout, l, p, &reps[0]) });
            }
            entries.push(PageEntry { k, l, basis: reps.iter().map(|v| vector_element(layout, l, p, v)).collect() });
        }
    }
    let last = choice.transgressions.iter().map(|t| t.page).max().unwrap_or(1);
    Ok(EInfData {
        d,
        n,
        m,
        field: page.field,
        choice: choice.clone(),
        page: BiGradedPage { r: last + 1, d, n, m, field: page.field, k_max, entries },
        total,
        permanent_cocycles: cocycles,
        euler_by_page,
        ranks,
        first_violation,
    })
}

/// Runs every page and rejects choices whose abutment is nonzero above n+m.
pub fn run_to_einf(page: &BiGradedPage, choice: &DifferentialChoice) -> Result<EInfData, Error> {
    let data = run_pages(page, choice)?;
    match data.first_violation {
        Some(degree) => Err(Error::InfeasibleChoice { degree, bound: page.n + page.m }),
        None => Ok(data),
    }
}

/// Truncation used for every presentation the engines emit: covers the
/// vanishing range, the top relation `u^a` and the square of `v`.
pub fn artifact_truncation(d: u32, n: u32, m: u32) -> u32 {
    (n + m + d + 1).max(2 * m)
}

/// Ring presentation read off a free E_infinity page: `u` from `t (x) 1`, `v`
/// lifting the one surviving positive-row generator, relations from where the
/// rows stop, and the square of `v` with a parameter for every possible lower
/// filtration term.
pub fn ring_candidates(einf: &EInfData) -> Vec<Presentation> {
    if !einf.is_free() {
        return Vec::new();
    }
    let period = einf.d + 1;
    let gens: Vec<&PermanentCocycle> = einf.permanent_cocycles.iter().filter(|c| c.l > 0).collect();
    let [w] = gens.as_slice() else { return Vec::new() };
    if w.k != 0 {
        return Vec::new();
    }
    let row_len = |l: u32| einf.page.entries.iter().filter(|e| e.l == l && !e.basis.is_empty()).count() as u32;
    let a = row_len(0);
    let b = row_len(w.l);
    let lw = w.l;
    let field = einf.field;
    let minus = if field == FieldTag::Q { "-" } else { "+" };
    let mut rels = vec![format!("u^{a}")];
    let mut conditions = Vec::new();
    if b < a {
        let deg = lw + b * period;
        let mut rel = format!("v*u^{b}");
        if deg.is_multiple_of(period) && deg / period < a {
            rel.push_str(&format!(" {minus} alpha*u^{}", deg / period));
        } else if deg.is_multiple_of(period) {
            conditions.push(format!("alpha = 0 (u^{} vanishes)", deg / period));
        } else {
            conditions.push(format!("alpha = 0 (no power of u in degree {deg})"));
        }
        rels.push(rel);
    }
    let mut sq = "v^2".to_string();
    if (2 * lw) % period == 0 && 2 * lw / period < a {
        sq.push_str(&format!(" {minus} beta*u^{}", 2 * lw / period));
    } else {
        conditions.push(format!("beta = 0 (no nonzero power of u in degree {})", 2 * lw));
    }
    if lw % period == 0 && lw / period < b {
        sq.push_str(&format!(" {minus} gamma*u^{}*v", lw / period));
    } else {
        conditions.push(format!("gamma = 0 (no nonzero u^i*v in degree {})", 2 * lw));
    }
    rels.push(sq);
    let generators = vec![
        Generator { name: "u".into(), degree: period },
        Generator { name: "v".into(), degree: lw },
    ];
    let parsed: Result<Vec<_>, _> = rels.iter().map(|s| parse_relation(field, &generators, s)).collect();
    let truncation = artifact_truncation(einf.d, einf.n, einf.m);
    parsed
        .and_then(|r| Presentation::new(field, generators, r, conditions, truncation))
        .map(|p| vec![p])
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(pairs: &[(u32, usize)]) -> GradedDims {
        GradedDims::from_pairs(0, pairs)
    }

    #[test]
    fn e2_shapes() {
        let p = build_e2(3, 3, 5, FieldTag::Q).unwrap();
        assert_eq!(p.k_max, 12);
        for k in [0, 4, 8, 12] {
            for l in [0, 3, 5, 8] {
                assert_eq!(p.dim(k, l), 1);
            }
        }
        let p = build_e2(3, 3, 3, FieldTag::Q).unwrap();
        assert_eq!(p.dim(4, 3), 2);
        assert_eq!(p.dim(4, 6), 1);
        let p = build_e2(1, 2, 3, FieldTag::Z2).unwrap();
        assert_eq!(p.dim(2, 5), 1);
        assert_eq!(p.dim(1, 0), 0);
    }

    #[test]
    fn rational_choice_lists() {
        let c = enumerate_differentials(&build_e2(3, 3, 5, FieldTag::Q).unwrap());
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].transgressions.len(), 1);
        assert_eq!(c[0].transgressions[0].source, FiberClass::X);
        assert_eq!(c[0].transgressions[0].page, 4);
        assert!(enumerate_differentials(&build_e2(3, 2, 2, FieldTag::Q).unwrap()).is_empty());
        let c = enumerate_differentials(&build_e2(3, 3, 3, FieldTag::Q).unwrap());
        assert!(c.iter().any(|c| c.transgressions.len() == 2 && c.transgressions.iter().all(|t| t.page == 4)));
    }

    fn feasible(d: u32, n: u32, m: u32, f: FieldTag) -> Vec<EInfData> {
        let page = build_e2(d, n, m, f).unwrap();
        enumerate_differentials(&page).iter().filter_map(|c| run_to_einf(&page, c).ok()).collect()
    }

    #[test]
    fn rational_totals() {
        let e = feasible(3, 3, 5, FieldTag::Q);
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].total, dims(&[(0, 1), (5, 1)]));
        let e = feasible(3, 2, 5, FieldTag::Q);
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].total, dims(&[(0, 1), (2, 1), (4, 1)]));
        // x alone, y alone, or both: all give the same abutment
        let e = feasible(3, 3, 3, FieldTag::Q);
        assert_eq!(e.len(), 3);
        assert!(e.iter().all(|x| x.total == dims(&[(0, 1), (3, 1)])));
        let double = e.iter().find(|x| x.choice.transgressions.len() == 2).unwrap();
        let kernel = double.permanent_cocycles.iter().find(|c| c.l == 3).unwrap();
        assert_eq!(kernel.element.fiber.len(), 2);
    }

    #[test]
    fn rings_from_einf() {
        let e = feasible(3, 3, 5, FieldTag::Q);
        let p = &ring_candidates(&e[0])[0];
        assert_eq!(p.relations.len(), 2);
        assert_eq!(p.render_relation(&p.relations[0]), "u");
        assert_eq!(p.render_relation(&p.relations[1]), "v^2");
        assert_eq!(p.generators[1].degree, 5);
        let e = feasible(3, 2, 5, FieldTag::Q);
        let p = &ring_candidates(&e[0])[0];
        let rels: Vec<String> = p.relations.iter().map(|r| p.render_relation(r)).collect();
        assert_eq!(rels, ["u^2", "u*v", "v^2 - beta*u"]);
        assert!(p.conditions.iter().any(|c| c.starts_with("gamma = 0")));
        assert!(p.conditions.iter().any(|c| c.starts_with("alpha = 0")));
        let e = feasible(3, 3, 3, FieldTag::Q);
        let p = &ring_candidates(e.iter().find(|x| x.choice.transgressions.len() == 2).unwrap())[0];
        let rels: Vec<String> = p.relations.iter().map(|r| p.render_relation(r)).collect();
        assert_eq!(rels, ["u", "v^2"]);
        assert_eq!(p.generators[1].degree, 3);
    }

    #[test]
    fn mod2_worked_cases() {
        let e = feasible(3, 4, 7, FieldTag::Z2);
        assert_eq!(e.len(), 2);
        for x in &e {
            assert_eq!(x.total, dims(&[(0, 1), (4, 2), (8, 1)]));
        }
        let e = feasible(3, 3, 6, FieldTag::Z2);
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].total, dims(&[(0, 1), (6, 1)]));
    }
}
