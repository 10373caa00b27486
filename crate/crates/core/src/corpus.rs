//! Random and exhaustive instance generators used by the test suites and the
//! acceptance run. Every generator returns validated objects.

use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::lattice::FiniteSemilattice;
use crate::semigroup::FiniteInverseSemigroup;
use crate::symbolic::finite::FiniteBlockSystem;
use crate::symbolic::{
    find_contracting_block, hypothesis_check_at, Alphabet, BlockSystem, SearchConfig, Word,
};

/// The tree-like semilattice of a rooted forest: node `i` is element `i + 1`,
/// a node lies below its ancestors, and unrelated nodes meet in zero.
/// `parents[i]` must be `None` or less than `i`.
pub fn forest_semilattice(parents: &[Option<usize>]) -> FiniteSemilattice {
    let n = parents.len();
    // ancestors[i]: nodes on the path from i to its root, including i
    let mut ancestors: Vec<BTreeSet<usize>> = Vec::with_capacity(n);
    for (i, p) in parents.iter().enumerate() {
        let mut set = match p {
            Some(p) => {
                assert!(*p < i, "parents must precede their children");
                ancestors[*p].clone()
            }
            None => BTreeSet::new(),
        };
        set.insert(i);
        ancestors.push(set);
    }
    let mut table = vec![vec![0; n + 1]; n + 1];
    for i in 0..n {
        for j in 0..n {
            table[i + 1][j + 1] = if ancestors[i].contains(&j) {
                i + 1
            } else if ancestors[j].contains(&i) {
                j + 1
            } else {
                0
            };
        }
    }
    FiniteSemilattice::from_table(&table).expect("forests give semilattices")
}

/// Every parent array on `nodes` nodes; together they realize every
/// tree-like semilattice with `nodes + 1` elements up to isomorphism.
pub fn all_forests(nodes: usize) -> Vec<Vec<Option<usize>>> {
    let mut out = vec![Vec::new()];
    for i in 0..nodes {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<Option<usize>>| {
                std::iter::once(None)
                    .chain((0..i).map(Some))
                    .map(move |p| {
                        let mut next = prefix.clone();
                        next.push(p);
                        next
                    })
            })
            .collect();
    }
    out
}

pub fn random_forest<R: Rng>(rng: &mut R, nodes: usize) -> Vec<Option<usize>> {
    (0..nodes)
        .map(|i| if i == 0 || rng.gen_bool(0.3) { None } else { Some(rng.gen_range(0..i)) })
        .collect()
}

/// The meet table of `lattice` with its nonzero elements shuffled.
pub fn shuffled_table<R: Rng>(rng: &mut R, lattice: &FiniteSemilattice) -> Vec<Vec<usize>> {
    let n = lattice.size();
    let mut relabel: Vec<usize> = (1..n).collect();
    relabel.shuffle(rng);
    relabel.insert(0, 0);
    let old = lattice.table();
    let mut table = vec![vec![0; n]; n];
    for e in 0..n {
        for f in 0..n {
            table[relabel[e]][relabel[f]] = relabel[old[e][f]];
        }
    }
    table
}

/// Subsets of a `ground`-point set closed under intersection, with the
/// empty set as zero; at most `max_size` elements.
pub fn random_intersection_family<R: Rng>(rng: &mut R, ground: u32, max_size: usize) -> FiniteSemilattice {
    let full = (1u64 << ground) - 1;
    loop {
        let mut sets: Vec<u64> = vec![0];
        for _ in 0..rng.gen_range(1..max_size) {
            let s = rng.gen_range(1..=full);
            let mut frontier = vec![s];
            while let Some(s) = frontier.pop() {
                if sets.contains(&s) {
                    continue;
                }
                frontier.extend(sets.iter().map(|t| s & t));
                sets.push(s);
            }
        }
        if sets.len() <= max_size {
            return FiniteSemilattice::from_intersection_family(&sets).expect("closed under intersection");
        }
    }
}

/// A partial bijection of `{0, .., points-1}`; `map[x]` is the image of `x`.
pub type PartialBijection = Vec<Option<usize>>;

fn compose(s: &PartialBijection, t: &PartialBijection) -> PartialBijection {
    t.iter().map(|x| x.and_then(|y| s[y])).collect()
}

fn invert(s: &PartialBijection) -> PartialBijection {
    let mut inv = vec![None; s.len()];
    for (x, y) in s.iter().enumerate() {
        if let Some(y) = y {
            inv[*y] = Some(x);
        }
    }
    inv
}

/// The inverse semigroup generated by `gens` under composition (`s·t`
/// applies `t` first) and inversion, with the empty map as element 0.
/// `None` if it has more than `max_size` elements.
pub fn partial_bijection_closure(gens: &[PartialBijection], points: usize, max_size: usize) -> Option<FiniteInverseSemigroup> {
    let mut elements: Vec<PartialBijection> = vec![vec![None; points]];
    let mut index: HashMap<PartialBijection, usize> = HashMap::from([(elements[0].clone(), 0)]);
    let mut push = |s: PartialBijection, elements: &mut Vec<PartialBijection>| {
        if !index.contains_key(&s) {
            index.insert(s.clone(), elements.len());
            elements.push(s);
        }
    };
    for g in gens {
        push(g.clone(), &mut elements);
        push(invert(g), &mut elements);
    }
    let mut done = 0;
    while done < elements.len() {
        if elements.len() > max_size {
            return None;
        }
        let s = elements[done].clone();
        for t in elements.clone() {
            push(compose(&s, &t), &mut elements);
            push(compose(&t, &s), &mut elements);
        }
        done += 1;
    }
    if elements.len() > max_size {
        return None;
    }
    let lookup: HashMap<&PartialBijection, usize> = elements.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let table: Vec<Vec<usize>> = elements
        .iter()
        .map(|s| elements.iter().map(|t| lookup[&compose(s, t)]).collect())
        .collect();
    Some(FiniteInverseSemigroup::from_table(&table, 0).expect("partial bijections form an inverse semigroup"))
}

pub fn random_partial_bijection<R: Rng>(rng: &mut R, points: usize) -> PartialBijection {
    let mut targets: Vec<usize> = (0..points).collect();
    targets.shuffle(rng);
    (0..points)
        .map(|x| rng.gen_bool(0.7).then_some(targets[x]))
        .collect()
}

/// A random inverse semigroup of partial bijections with at most
/// `max_size` elements.
pub fn random_inverse_semigroup<R: Rng>(rng: &mut R, max_size: usize) -> FiniteInverseSemigroup {
    loop {
        let points = rng.gen_range(1..=3);
        let gens: Vec<PartialBijection> = (0..rng.gen_range(1..=2))
            .map(|_| random_partial_bijection(rng, points))
            .collect();
        if let Some(s) = partial_bijection_closure(&gens, points, max_size) {
            return s;
        }
    }
}

/// A random permutation block system with at most `max_ground` points and
/// `max_blocks` blocks satisfying the standing assumption at every power.
/// The number of blocks is uniform in `1..=max_blocks`.
pub fn random_permutation_system<R: Rng>(rng: &mut R, max_ground: usize, max_blocks: usize) -> FiniteBlockSystem {
    let n = rng.gen_range(1..=max_blocks);
    loop {
        let candidate = if rng.gen_bool(0.5) {
            scattered_candidate(rng, max_ground, n)
        } else {
            cell_candidate(rng, max_ground, n)
        };
        if let Some(system) = candidate.filter(FiniteBlockSystem::satisfies_hypothesis) {
            return system;
        }
    }
}

/// Uniform permutation, uniform assignment of points to blocks.
fn scattered_candidate<R: Rng>(rng: &mut R, max_ground: usize, n: usize) -> Option<FiniteBlockSystem> {
    let ground = rng.gen_range(n.max(2)..=max_ground.max(n));
    let mut map: Vec<usize> = (0..ground).collect();
    map.shuffle(rng);
    let mut points: Vec<usize> = (0..ground).collect();
    points.shuffle(rng);
    let mut blocks: Vec<Vec<usize>> = points[..n].iter().map(|&x| vec![x]).collect();
    for &x in &points[n..] {
        blocks[rng.gen_range(0..n)].push(x);
    }
    FiniteBlockSystem::new(map, blocks).ok()
}

/// The ground set is cut into cells that the permutation moves around
/// cyclically, and blocks are unions of cells.
fn cell_candidate<R: Rng>(rng: &mut R, max_ground: usize, n: usize) -> Option<FiniteBlockSystem> {
    let cells = rng.gen_range(n..=(n + 4).min(max_ground));
    let mut order: Vec<usize> = (0..cells).collect();
    order.shuffle(rng);
    // consecutive runs of `order` are the cycles of the cell permutation
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for c in order {
        match cycles.last_mut() {
            Some(cycle) if rng.gen_bool(0.6) => cycle.push(c),
            _ => cycles.push(vec![c]),
        }
    }
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); cells];
    let mut next = 0;
    for cycle in &cycles {
        let size = rng.gen_range(1..=3);
        for &c in cycle {
            members[c] = (next..next + size).collect();
            next += size;
        }
    }
    if next > max_ground {
        return None;
    }
    let mut map = vec![0; next];
    for cycle in &cycles {
        for (t, &c) in cycle.iter().enumerate() {
            let mut targets = members[cycle[(t + 1) % cycle.len()]].clone();
            targets.shuffle(rng);
            for (&x, y) in members[c].iter().zip(targets) {
                map[x] = y;
            }
        }
    }
    let mut slots: Vec<usize> = (0..cells).collect();
    slots.shuffle(rng);
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, &c) in slots.iter().enumerate() {
        let b = if k < n { k } else { rng.gen_range(0..n) };
        blocks[b].extend(&members[c]);
    }
    FiniteBlockSystem::new(map, blocks).ok()
}

/// A permutation system on which the block search goes through a repeated
/// incidence matrix. One block `X_0` is swapped with the union `Y` of the
/// others, and `f^2` permutes `Y` without respecting its blocks.
pub fn repeat_permutation_system<R: Rng>(rng: &mut R, max_ground: usize, max_blocks: usize) -> FiniteBlockSystem {
    assert!(max_blocks >= 3 && max_ground >= 4, "the construction needs three blocks and four points");
    loop {
        let half = rng.gen_range(2..=max_ground / 2);
        let n = rng.gen_range(3..=max_blocks.min(half + 1));
        let mut there: Vec<usize> = (half..2 * half).collect();
        let mut back: Vec<usize> = (0..half).collect();
        there.shuffle(rng);
        back.shuffle(rng);
        let map: Vec<usize> = there.into_iter().chain(back).collect();
        let mut rest: Vec<usize> = (half..2 * half).collect();
        rest.shuffle(rng);
        let mut blocks: Vec<Vec<usize>> = vec![(0..half).collect()];
        blocks.extend(rest[..n - 1].iter().map(|&x| vec![x]));
        for &x in &rest[n - 1..] {
            let b = rng.gen_range(1..n);
            blocks[b].push(x);
        }
        let system = FiniteBlockSystem::new(map, blocks).expect("generated systems are well formed");
        if !system.satisfies_hypothesis() {
            continue;
        }
        let run = find_contracting_block(&mut system.oracle(), &SearchConfig::default());
        if run.outcome.is_ok() && run.trace.case2_count() > 0 {
            return system;
        }
    }
}

/// A finite system as a cylinder system over `{ε}`: point `x` becomes the
/// cylinder of the base-`arity` spelling of `x` with a fixed number of
/// digits, and the unused spellings form one extra block.
///
/// With `sink`, at least one spelling is left over and the first of them is
/// sent into its own subcylinder `·a`, so the map is no longer surjective;
/// the other spare spellings stay fixed.
pub fn embed_permutation_system(system: &FiniteBlockSystem, arity: u8, sink: bool) -> BlockSystem {
    let n = system.ground_size();
    let mut digits = 1;
    while (arity as usize).pow(digits) < n + usize::from(sink) {
        digits += 1;
    }
    let spell = |x: usize| {
        let mut letters = vec![0u8; digits as usize];
        let mut rest = x;
        for slot in letters.iter_mut().rev() {
            *slot = (rest % arity as usize) as u8;
            rest /= arity as usize;
        }
        Word::from_letters(letters)
    };
    let total = (arity as usize).pow(digits);
    let mut blocks: Vec<Vec<Word>> = system
        .blocks()
        .iter()
        .map(|b| b.iter().map(|&x| spell(x)).collect())
        .collect();
    let mut map: Vec<(Word, Word)> = (0..n).map(|x| (spell(x), spell(system.map()[x]))).collect();
    if total > n {
        blocks.push((n..total).map(spell).collect());
        map.extend((n..total).map(|x| {
            let target = if sink && x == n { spell(x).child(0) } else { spell(x) };
            (spell(x), target)
        }));
    }
    BlockSystem::from_parts(Alphabet::standard(arity as usize), vec![Word::empty()], blocks, map)
        .expect("embeddings of permutation systems are valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CylinderParams {
    pub max_arity: u8,
    pub max_word_len: usize,
    pub max_blocks: usize,
    /// Powers at which a random candidate must satisfy the standing
    /// assumption to be kept.
    pub sweep: u64,
}

impl Default for CylinderParams {
    fn default() -> Self {
        CylinderParams { max_arity: 4, max_word_len: 4, max_blocks: 5, sweep: 8 }
    }
}

/// A complete prefix code: the leaves after `splits` random leaf splits,
/// never splitting below `max_len`.
fn random_code<R: Rng>(rng: &mut R, arity: u8, splits: usize, max_len: usize) -> Vec<Word> {
    let mut leaves = vec![Word::empty()];
    for _ in 0..splits {
        let open: Vec<usize> = (0..leaves.len()).filter(|&i| leaves[i].len() < max_len).collect();
        let Some(&i) = open.choose(rng) else { break };
        let leaf = leaves.swap_remove(i);
        leaves.extend((0..arity).map(|a| leaf.child(a)));
    }
    leaves.sort();
    leaves
}

fn random_extension<R: Rng>(rng: &mut R, arity: u8, word: &Word, max_extra: usize, max_len: usize) -> Word {
    let extra = rng.gen_range(0..=max_extra).min(max_len.saturating_sub(word.len()));
    (0..extra).fold(word.clone(), |w, _| w.child(rng.gen_range(0..arity)))
}

/// Blocks are single cylinders; each block cylinder is sent onto a
/// subcylinder of a block. Images of blocks stay single cylinders inside one
/// block, so the standing assumption holds at every power. Not surjective.
pub fn staged_cylinder_system<R: Rng>(rng: &mut R, params: &CylinderParams) -> BlockSystem {
    loop {
        let arity = rng.gen_range(2..=params.max_arity);
        let splits = rng.gen_range(1..=2);
        let leaves = random_code(rng, arity, splits, params.max_word_len.min(2));
        if leaves.len() > params.max_blocks {
            continue;
        }
        let mut targets: Vec<Word> = Vec::new();
        for _ in &leaves {
            let mut placed = None;
            for _ in 0..20 {
                let base = leaves.choose(rng).expect("nonempty code");
                let t = random_extension(rng, arity, base, 2, params.max_word_len);
                if targets.iter().all(|u| !u.is_comparable(&t)) {
                    placed = Some(t);
                    break;
                }
            }
            match placed {
                Some(t) => targets.push(t),
                None => break,
            }
        }
        if targets.len() < leaves.len() {
            continue;
        }
        let map = leaves.iter().cloned().zip(targets).collect();
        let blocks = leaves.iter().map(|l| vec![l.clone()]).collect();
        let system = BlockSystem::from_parts(Alphabet::standard(arity as usize), vec![Word::empty()], blocks, map)
            .expect("staged systems are valid");
        if !system.is_surjective() {
            return system;
        }
    }
}

/// Random blocks made of several cylinders and a random injective rewrite
/// system on a refinement of them; kept when not surjective and when the
/// standing assumption holds up to `params.sweep`.
pub fn random_cylinder_system<R: Rng>(rng: &mut R, params: &CylinderParams) -> BlockSystem {
    loop {
        if let Some(system) = random_cylinder_candidate(rng, params) {
            return system;
        }
    }
}

fn random_cylinder_candidate<R: Rng>(rng: &mut R, params: &CylinderParams) -> Option<BlockSystem> {
    let arity = rng.gen_range(2..=params.max_arity);
    let splits = rng.gen_range(1..=3);
    let cells = random_code(rng, arity, splits, params.max_word_len.min(2));
    let n = rng.gen_range(1..=params.max_blocks.min(cells.len()));
    let mut order: Vec<usize> = (0..cells.len()).collect();
    order.shuffle(rng);
    let mut blocks: Vec<Vec<Word>> = vec![Vec::new(); n];
    for (slot, &c) in order.iter().enumerate() {
        let b = if slot < n { slot } else { rng.gen_range(0..n) };
        blocks[b].push(cells[c].clone());
    }
    let mut sources = Vec::new();
    for c in &cells {
        if c.len() < params.max_word_len && rng.gen_bool(0.3) {
            sources.extend((0..arity).map(|a| c.child(a)));
        } else {
            sources.push(c.clone());
        }
    }
    let mut targets: Vec<Word> = Vec::new();
    for _ in &sources {
        let t = (0..20).find_map(|_| {
            let base = cells.choose(rng).expect("nonempty code");
            let t = random_extension(rng, arity, base, 1, params.max_word_len);
            targets.iter().all(|u| !u.is_comparable(&t)).then_some(t)
        })?;
        targets.push(t);
    }
    targets.shuffle(rng);
    let map = sources.into_iter().zip(targets).collect();
    let system = BlockSystem::from_parts(Alphabet::standard(arity as usize), vec![Word::empty()], blocks, map).ok()?;
    if system.is_surjective() {
        return None;
    }
    let mut oracle = system.oracle();
    for m in 1..=params.sweep {
        hypothesis_check_at(&mut oracle, m).ok()?;
    }
    Some(system)
}
