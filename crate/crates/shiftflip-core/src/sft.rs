use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::alphabet::{Alphabet, Symbol};
use crate::error::Error;
use crate::point::{Coord, EventuallyPeriodicPoint, PeriodicPoint};
use crate::word::Word;
use crate::Result;

/// An `m`-step shift of finite type, presented by its set of allowed
/// `(m+1)`-blocks.
///
/// The presentation is kept *essential*: every allowed block actually occurs
/// in some bi-infinite point.  Construction normalizes to this form by
/// repeatedly discarding blocks that cannot be continued in both directions,
/// and fails if nothing survives (the presentation would define the empty
/// space).
///
/// Internally the space is the edge shift of the De Bruijn-style graph whose
/// vertices are the `m`-blocks occurring as a prefix or suffix of an allowed
/// block and whose edges are the allowed `(m+1)`-blocks themselves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SftPresentation {
    alphabet: Alphabet,
    step: usize,
    allowed: BTreeSet<Word>,
    vertices: BTreeSet<Word>,
    out: BTreeMap<Word, Vec<Symbol>>,
}

impl SftPresentation {
    /// Build from a list of forbidden words, each of length at most `step+1`.
    pub fn from_forbidden(
        alphabet: Alphabet,
        step: usize,
        forbidden: impl IntoIterator<Item = Word>,
    ) -> Result<Self> {
        let width = step + 1;
        let forbidden: Vec<Word> = forbidden.into_iter().collect();
        for w in &forbidden {
            if w.is_empty() {
                return Err(Error::domain("forbidden word is empty"));
            }
            if w.len() > width {
                return Err(Error::domain(alloc::format!(
                    "forbidden word of length {} exceeds the window width {}",
                    w.len(),
                    width
                )));
            }
            for &s in w.symbols() {
                if !alphabet.contains(s) {
                    return Err(Error::domain("forbidden word uses an unknown symbol"));
                }
            }
        }
        let mut allowed = BTreeSet::new();
        let mut buf: Vec<Symbol> = Vec::with_capacity(width);
        enumerate_words(&alphabet, width, &mut buf, &mut |w| {
            let ok = forbidden
                .iter()
                .all(|f| !w.windows(f.len()).any(|win| win == f.symbols()));
            if ok {
                allowed.insert(Word::new(w.to_vec()));
            }
        });
        Self::from_allowed_blocks(alphabet, step, allowed)
    }

    /// Build from an explicit set of allowed `(step+1)`-blocks.
    pub fn from_allowed_blocks(
        alphabet: Alphabet,
        step: usize,
        allowed: impl IntoIterator<Item = Word>,
    ) -> Result<Self> {
        let width = step + 1;
        let mut blocks = BTreeSet::new();
        for w in allowed {
            if w.len() != width {
                return Err(Error::domain(alloc::format!(
                    "allowed block of length {}, expected {}",
                    w.len(),
                    width
                )));
            }
            for &s in w.symbols() {
                if !alphabet.contains(s) {
                    return Err(Error::domain("allowed block uses an unknown symbol"));
                }
            }
            blocks.insert(w);
        }
        let blocks = essential_normalize(step, blocks);
        if blocks.is_empty() {
            return Err(Error::domain("presentation defines the empty space"));
        }
        let mut vertices = BTreeSet::new();
        let mut out: BTreeMap<Word, Vec<Symbol>> = BTreeMap::new();
        for w in &blocks {
            let s = w.symbols();
            let from = Word::new(s[..step].to_vec());
            let to = Word::new(s[1..].to_vec());
            vertices.insert(from.clone());
            vertices.insert(to);
            out.entry(from).or_default().push(s[step]);
        }
        // Out-edges are produced in block order, hence already sorted.
        Ok(SftPresentation {
            alphabet,
            step,
            allowed: blocks,
            vertices,
            out,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// The step `m`: membership is determined by `(m+1)`-windows.
    pub fn step(&self) -> usize {
        self.step
    }

    /// The allowed `(step+1)`-blocks, essential-normalized, in order.
    pub fn allowed_blocks(&self) -> impl Iterator<Item = &Word> {
        self.allowed.iter()
    }

    pub fn allowed_count(&self) -> usize {
        self.allowed.len()
    }

    /// The `step`-blocks occurring in the space (graph vertices), in order.
    pub fn vertices(&self) -> impl Iterator<Item = &Word> {
        self.vertices.iter()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Is this `(step+1)`-block allowed?
    pub fn allows(&self, block: &[Symbol]) -> bool {
        debug_assert_eq!(block.len(), self.step + 1);
        self.allowed.contains(&Word::new(block.to_vec()))
    }

    fn successors(&self, vertex: &Word) -> &[Symbol] {
        self.out.get(vertex).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Language membership for a finite word.
    pub fn in_language(&self, w: &[Symbol]) -> bool {
        let width = self.step + 1;
        if w.is_empty() {
            return true;
        }
        if w.iter().any(|s| !self.alphabet.contains(*s)) {
            return false;
        }
        if w.len() < width {
            // Short words are exactly the subwords of allowed blocks.
            return self
                .allowed
                .iter()
                .any(|b| b.symbols().windows(w.len()).any(|win| win == w));
        }
        w.windows(width).all(|win| self.allows(win))
    }

    /// Visit every length-`n` block of the language in lexicographic order.
    pub fn for_each_block(&self, n: usize, f: &mut dyn FnMut(&[Symbol])) {
        let width = self.step + 1;
        if n == 0 {
            f(&[]);
            return;
        }
        if n < width {
            let mut short: BTreeSet<Word> = BTreeSet::new();
            for b in &self.allowed {
                for win in b.symbols().windows(n) {
                    short.insert(Word::new(win.to_vec()));
                }
            }
            for w in &short {
                f(w.symbols());
            }
            return;
        }
        let mut buf: Vec<Symbol> = Vec::with_capacity(n);
        for b in &self.allowed {
            buf.clear();
            buf.extend_from_slice(b.symbols());
            self.extend_blocks(n, &mut buf, f);
        }
    }

    fn extend_blocks(&self, n: usize, buf: &mut Vec<Symbol>, f: &mut dyn FnMut(&[Symbol])) {
        if buf.len() == n {
            f(buf);
            return;
        }
        let vertex = Word::new(buf[buf.len() - self.step..].to_vec());
        for i in 0..self.successors(&vertex).len() {
            let s = self.successors(&vertex)[i];
            buf.push(s);
            self.extend_blocks(n, buf, f);
            buf.pop();
        }
    }

    /// All length-`n` blocks of the language, in lexicographic order.
    pub fn language(&self, n: usize) -> Vec<Word> {
        let mut v = Vec::new();
        self.for_each_block(n, &mut |w| v.push(Word::new(w.to_vec())));
        v
    }

    /// The vertex graph as index-based adjacency lists (vertices in sorted
    /// order; edge `i -> j` for each allowed extension of vertex `i`).
    fn adjacency(&self) -> (Vec<&Word>, Vec<Vec<usize>>) {
        let verts: Vec<&Word> = self.vertices.iter().collect();
        let index: BTreeMap<&Word, usize> =
            verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut fwd: Vec<Vec<usize>> = alloc::vec![Vec::new(); verts.len()];
        for (i, v) in verts.iter().enumerate() {
            for &s in self.successors(v) {
                fwd[i].push(index[&successor_vertex(v, s)]);
            }
        }
        (verts, fwd)
    }

    /// `|B_n|` without enumerating, via a path-count dynamic program.
    pub fn language_count(&self, n: usize) -> Result<u64> {
        let width = self.step + 1;
        if n == 0 {
            return Ok(1);
        }
        if n < width {
            let mut short: BTreeSet<Word> = BTreeSet::new();
            for b in &self.allowed {
                for win in b.symbols().windows(n) {
                    short.insert(Word::new(win.to_vec()));
                }
            }
            return Ok(short.len() as u64);
        }
        // Blocks of length n correspond to walks with n - step edges; count
        // walks starting anywhere.
        let (verts, fwd) = self.adjacency();
        let mut counts: Vec<u64> = alloc::vec![1; verts.len()];
        for _ in 0..(n - self.step) {
            let mut next: Vec<u64> = alloc::vec![0; verts.len()];
            for (i, row) in fwd.iter().enumerate() {
                for &j in row {
                    next[i] = next[i]
                        .checked_add(counts[j])
                        .ok_or_else(|| Error::domain("language count overflows u64"))?;
                }
            }
            counts = next;
        }
        let mut total: u64 = 0;
        for c in counts {
            total = total
                .checked_add(c)
                .ok_or_else(|| Error::domain("language count overflows u64"))?;
        }
        Ok(total)
    }

    /// All points of period dividing `n` (as length-`n` cyclic words, phase
    /// preserved), in lexicographic order of the word.
    pub fn periodic_points(&self, n: usize) -> Vec<PeriodicPoint> {
        assert!(n >= 1, "period must be positive");
        let mut result = Vec::new();
        let mut buf: Vec<Symbol> = Vec::with_capacity(n);
        self.periodic_dfs(n, &mut buf, &mut result);
        result
    }

    fn periodic_dfs(&self, n: usize, buf: &mut Vec<Symbol>, out: &mut Vec<PeriodicPoint>) {
        let width = self.step + 1;
        if buf.len() == n {
            // Linear windows were checked on the way; verify the wrapping ones.
            let start = n.saturating_sub(self.step);
            let ok = (start..n).all(|i| {
                let mut win = Vec::with_capacity(width);
                for j in 0..width {
                    win.push(buf[(i + j) % n]);
                }
                self.allows(&win)
            });
            if ok {
                out.push(PeriodicPoint::new(Word::new(buf.clone())).unwrap());
            }
            return;
        }
        for s in self.alphabet.symbols() {
            buf.push(s);
            let l = buf.len();
            if l < width || self.allows(&buf[l - width..]) {
                self.periodic_dfs(n, buf, out);
            }
            buf.pop();
        }
    }

    /// Does the space contain this periodic point?
    pub fn contains_periodic(&self, p: &PeriodicPoint) -> bool {
        let n = p.period() as i64;
        let width = self.step + 1;
        (0..n).all(|i| {
            let mut win = Vec::with_capacity(width);
            for j in 0..width as i64 {
                win.push(p.at(i + j));
            }
            self.allows(&win)
        })
    }

    /// Does the space contain this eventually periodic point?
    ///
    /// Only finitely many windows need checking: windows entirely inside a
    /// tail repeat with the tail's period.
    pub fn contains_ep(&self, p: &EventuallyPeriodicPoint) -> bool {
        let m = self.step as i64;
        let lo = p.center_start() - p.left().len() as i64 - m - 1;
        let hi = p.center_end() + p.right().len() as i64;
        (lo..=hi).all(|i| {
            let mut win = Vec::with_capacity(self.step + 1);
            for j in 0..=m {
                win.push(p.at(i + j));
            }
            self.allows(&win)
        })
    }

    /// Strong connectivity of the underlying graph.  For an essential
    /// presentation this is exactly irreducibility of the space: any block can
    /// be steered into any other.
    pub fn is_irreducible(&self) -> bool {
        let (verts, fwd) = self.adjacency();
        if verts.is_empty() {
            return false;
        }
        let mut rev: Vec<Vec<usize>> = alloc::vec![Vec::new(); verts.len()];
        for (i, row) in fwd.iter().enumerate() {
            for &j in row {
                rev[j].push(i);
            }
        }
        bfs_count(&fwd, 0) == verts.len() && bfs_count(&rev, 0) == verts.len()
    }

    /// Is the space infinite (as a set of points)?
    ///
    /// Defined here for irreducible spaces only (reducible input is a
    /// precondition error).  For an essential irreducible presentation the
    /// space is finite iff every vertex has out-degree exactly one — the
    /// graph is then a single cycle.
    pub fn is_infinite(&self) -> Result<bool> {
        if !self.is_irreducible() {
            return Err(Error::precondition(
                "infiniteness test requires an irreducible space",
            ));
        }
        Ok(self.out.values().any(|succ| succ.len() >= 2))
    }

    /// A canonical finitary block: the least `step`-block of the language
    /// (least allowed symbol when `step == 0`).  In an `m`-step space every
    /// block of length at least `m` is finitary, so this block synchronizes:
    /// any legal past and legal future through it combine.
    pub fn synchronizing_block(&self) -> Word {
        if self.step == 0 {
            let first = self.allowed.iter().next().expect("nonempty");
            return first.clone();
        }
        self.vertices.iter().next().expect("nonempty").clone()
    }

    /// Least word `w` (shortest, then lexicographically) such that `u w v`
    /// lies in the language, searching lengths `0..=max_len`.
    ///
    /// Both `u` and `v` must lie in the language themselves.
    pub fn find_connector(&self, u: &[Symbol], v: &[Symbol], max_len: usize) -> Result<Word> {
        if !self.in_language(u) || !self.in_language(v) {
            return Err(Error::precondition(
                "connector endpoints must lie in the language",
            ));
        }
        for len in 0..=max_len {
            let mut buf: Vec<Symbol> = Vec::with_capacity(len);
            if let Some(w) = self.connector_dfs(u, v, len, &mut buf) {
                return Ok(w);
            }
        }
        Err(Error::search_bound(alloc::format!(
            "no connector of length at most {max_len}"
        )))
    }

    fn connector_dfs(
        &self,
        u: &[Symbol],
        v: &[Symbol],
        len: usize,
        buf: &mut Vec<Symbol>,
    ) -> Option<Word> {
        let width = self.step + 1;
        if buf.len() == len {
            let mut joined = u.to_vec();
            joined.extend_from_slice(buf);
            let boundary = joined.len();
            joined.extend_from_slice(v);
            // Windows ending before the v part were checked incrementally (or
            // lie inside u, which is in the language); check the rest.
            if joined.len() >= width {
                let lo = boundary.saturating_sub(self.step);
                for i in lo..=joined.len() - width {
                    if !self.allows(&joined[i..i + width]) {
                        return None;
                    }
                }
            }
            return Some(Word::new(buf.clone()));
        }
        for s in self.alphabet.symbols() {
            buf.push(s);
            let mut joined = u.to_vec();
            joined.extend_from_slice(buf);
            let l = joined.len();
            if l < width || self.allows(&joined[l - width..]) {
                if let Some(w) = self.connector_dfs(u, v, len, buf) {
                    return Some(w);
                }
            }
            buf.pop();
        }
        None
    }
}

/// The vertex reached from `v` along the edge appending `s`: drop the first
/// symbol of `v . s`.
fn successor_vertex(v: &Word, s: Symbol) -> Word {
    let mut k = v.symbols().to_vec();
    k.push(s);
    k.remove(0);
    Word::new(k)
}

fn bfs_count(adj: &[Vec<usize>], start: usize) -> usize {
    let mut seen = alloc::vec![false; adj.len()];
    let mut stack = alloc::vec![start];
    seen[start] = true;
    let mut count = 1;
    while let Some(i) = stack.pop() {
        for &j in &adj[i] {
            if !seen[j] {
                seen[j] = true;
                count += 1;
                stack.push(j);
            }
        }
    }
    count
}

/// Drop blocks until every one sits on a bi-infinite path: a block survives
/// only if its prefix vertex has an incoming edge and its suffix vertex has an
/// outgoing edge.
fn essential_normalize(step: usize, mut blocks: BTreeSet<Word>) -> BTreeSet<Word> {
    loop {
        let mut has_out: BTreeSet<&[Symbol]> = BTreeSet::new();
        let mut has_in: BTreeSet<&[Symbol]> = BTreeSet::new();
        for w in &blocks {
            has_out.insert(&w.symbols()[..step]);
            has_in.insert(&w.symbols()[1..]);
        }
        let keep: BTreeSet<Word> = blocks
            .iter()
            .filter(|w| {
                has_in.contains(&w.symbols()[..step]) && has_out.contains(&w.symbols()[1..])
            })
            .cloned()
            .collect();
        if keep.len() == blocks.len() {
            return blocks;
        }
        blocks = keep;
    }
}

fn enumerate_words(
    alphabet: &Alphabet,
    len: usize,
    buf: &mut Vec<Symbol>,
    f: &mut dyn FnMut(&[Symbol]),
) {
    if buf.len() == len {
        f(buf);
        return;
    }
    for s in alphabet.symbols() {
        buf.push(s);
        enumerate_words(alphabet, len, buf, f);
        buf.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn golden_mean_basics() {
        let x = presets::golden_mean();
        assert_eq!(x.step(), 1);
        assert_eq!(x.allowed_count(), 3); // 00, 01, 10
        assert_eq!(x.vertex_count(), 2);
        assert!(x.is_irreducible());
        assert!(x.is_infinite().unwrap());
        let a = x.alphabet();
        assert_eq!(x.synchronizing_block().render(a), "0");
    }

    #[test]
    fn golden_mean_language_counts_are_fibonacci() {
        let x = presets::golden_mean();
        // |B_n| = fib(n+2) with fib(1) = fib(2) = 1.
        let mut fib = alloc::vec![0u64; 40];
        fib[1] = 1;
        fib[2] = 1;
        for i in 3..40 {
            fib[i] = fib[i - 1] + fib[i - 2];
        }
        for n in 0..=20 {
            assert_eq!(x.language_count(n).unwrap(), fib[n + 2], "n = {n}");
            assert_eq!(x.language(n).len() as u64, fib[n + 2], "n = {n}");
        }
    }

    #[test]
    fn golden_mean_language_membership() {
        let x = presets::golden_mean();
        let a = x.alphabet();
        assert!(x.in_language(Word::parse(a, "0101001").unwrap().symbols()));
        assert!(!x.in_language(Word::parse(a, "0110").unwrap().symbols()));
        assert!(x.in_language(&[]));
    }

    #[test]
    fn golden_mean_periodic_points() {
        let x = presets::golden_mean();
        // Period 1: only 0^infty.  Period dividing 2: 00, 01, 10.
        assert_eq!(x.periodic_points(1).len(), 1);
        let p2 = x.periodic_points(2);
        let a = x.alphabet();
        let words: Vec<_> = p2.iter().map(|p| p.word().render(a)).collect();
        assert_eq!(words, ["00", "01", "10"]);
        // Counts follow the trace of the adjacency matrix power (Lucas
        // numbers): 1, 3, 4, 7, 11, 18.
        for (n, want) in [(1, 1), (2, 3), (3, 4), (4, 7), (5, 11), (6, 18)] {
            assert_eq!(x.periodic_points(n).len(), want, "n = {n}");
        }
    }

    #[test]
    fn full_shift_counts() {
        let x = presets::full_shift(2).unwrap();
        assert_eq!(x.step(), 0);
        for n in 0..=10 {
            assert_eq!(x.language_count(n).unwrap(), 1u64 << n);
        }
        assert_eq!(x.periodic_points(3).len(), 8);
        assert!(x.is_irreducible());
        assert!(x.is_infinite().unwrap());
    }

    #[test]
    fn two_step_no_triple_one() {
        let x = presets::no_triple_one();
        assert_eq!(x.step(), 2);
        assert_eq!(x.allowed_count(), 7); // all 3-blocks except 111
        let a = x.alphabet();
        assert!(x.in_language(Word::parse(a, "110110").unwrap().symbols()));
        assert!(!x.in_language(Word::parse(a, "0111").unwrap().symbols()));
        // Vertices are the four 2-blocks.
        assert_eq!(x.vertex_count(), 4);
        assert!(x.is_irreducible());
        // |B_n| = |B_{n-1}| + |B_{n-2}| + |B_{n-3}| for n >= 4.
        let mut c = alloc::vec![1u64, 2, 4, 7];
        for n in 4..=15 {
            let next = c[n - 1] + c[n - 2] + c[n - 3];
            c.push(next);
        }
        for n in 0..=15 {
            assert_eq!(x.language_count(n).unwrap(), c[n], "n = {n}");
        }
    }

    #[test]
    fn normalization_discards_dead_blocks() {
        // Forbid 01 and 10 over {0,1}: the space splits into the two fixed
        // points, allowed blocks 00 and 11, both essential.
        let a = Alphabet::new(["0", "1"]).unwrap();
        let x = SftPresentation::from_forbidden(
            a.clone(),
            1,
            [Word::parse(&a, "01").unwrap(), Word::parse(&a, "10").unwrap()],
        )
        .unwrap();
        assert_eq!(x.allowed_count(), 2);
        assert!(!x.is_irreducible());
        assert!(x.is_infinite().is_err());

        // Forbid 00 and 11: only the alternating orbit survives.
        let y = SftPresentation::from_forbidden(
            a.clone(),
            1,
            [Word::parse(&a, "00").unwrap(), Word::parse(&a, "11").unwrap()],
        )
        .unwrap();
        assert_eq!(y.allowed_count(), 2);
        assert!(y.is_irreducible());
        assert!(!y.is_infinite().unwrap());
        assert_eq!(y.periodic_points(2).len(), 2);
        assert_eq!(y.periodic_points(1).len(), 0);
    }

    #[test]
    fn normalization_can_empty_the_space() {
        // Forbidding every 1-block leaves nothing.
        let a = Alphabet::new(["0", "1"]).unwrap();
        let r = SftPresentation::from_forbidden(
            a.clone(),
            0,
            [Word::parse(&a, "0").unwrap(), Word::parse(&a, "1").unwrap()],
        );
        assert!(r.is_err());
    }

    #[test]
    fn dead_end_blocks_are_dropped() {
        // Over {0,1} with step 1, allow only 00 and 01: 01 leads to vertex 1
        // which has no outgoing edge, so only 00 survives.
        let a = Alphabet::new(["0", "1"]).unwrap();
        let x = SftPresentation::from_allowed_blocks(
            a.clone(),
            1,
            [Word::parse(&a, "00").unwrap(), Word::parse(&a, "01").unwrap()],
        )
        .unwrap();
        assert_eq!(x.allowed_count(), 1);
        assert_eq!(x.vertex_count(), 1);
        assert!(!x.is_infinite().unwrap());
    }

    #[test]
    fn ep_membership() {
        let x = presets::golden_mean();
        let a = x.alphabet();
        let p = EventuallyPeriodicPoint::new(
            Word::parse(a, "0").unwrap(),
            Word::parse(a, "010").unwrap(),
            Word::parse(a, "01").unwrap(),
            -1,
        )
        .unwrap();
        assert!(x.contains_ep(&p));
        let q = EventuallyPeriodicPoint::new(
            Word::parse(a, "0").unwrap(),
            Word::parse(a, "11").unwrap(),
            Word::parse(a, "0").unwrap(),
            0,
        )
        .unwrap();
        assert!(!x.contains_ep(&q));
        // Bad tail: left unit 1 would tile as 11.
        let r = EventuallyPeriodicPoint::new(
            Word::parse(a, "1").unwrap(),
            Word::parse(a, "0").unwrap(),
            Word::parse(a, "0").unwrap(),
            0,
        )
        .unwrap();
        assert!(!x.contains_ep(&r));
    }

    #[test]
    fn connector_search() {
        let x = presets::golden_mean();
        let a = x.alphabet();
        let one = Word::parse(a, "1").unwrap();
        // 1 _ 1 needs at least one 0 between.
        let w = x.find_connector(one.symbols(), one.symbols(), 3).unwrap();
        assert_eq!(w.render(a), "0");
        // 0 _ 0 needs nothing.
        let zero = Word::parse(a, "0").unwrap();
        let w = x.find_connector(zero.symbols(), zero.symbols(), 3).unwrap();
        assert!(w.is_empty());
        // Unsatisfiable within bound 0.
        assert!(x.find_connector(one.symbols(), one.symbols(), 0).is_err());
    }

    #[test]
    fn connector_in_two_step_space() {
        let x = presets::no_triple_one();
        let a = x.alphabet();
        let u = Word::parse(a, "11").unwrap();
        // 11 _ 11 must interpose a 0.
        let w = x.find_connector(u.symbols(), u.symbols(), 4).unwrap();
        assert_eq!(w.render(a), "0");
    }

    #[test]
    fn language_streaming_matches_materialized() {
        let x = presets::no_triple_one();
        for n in 0..=6 {
            let mut streamed = Vec::new();
            x.for_each_block(n, &mut |w| streamed.push(Word::new(w.to_vec())));
            assert_eq!(streamed, x.language(n));
            // Sorted and duplicate-free.
            for pair in streamed.windows(2) {
                assert!(pair[0] < pair[1]);
            }
        }
    }
}
