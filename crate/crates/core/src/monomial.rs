//! Shuffle tree monomials.
//!
//! A monomial of arity `n` is a planar rooted tree whose internal vertices
//! are labeled by shuffle generators and whose leaves carry the labels
//! `1..=n`, each exactly once, subject to the shuffle condition: at every
//! internal vertex the minimal leaf labels of the child subtrees strictly
//! increase from left to right.  Monomials are immutable and canonical by
//! construction.
//!
//! Composition follows the shuffle-operad convention: grafting `T2` onto
//! leaf `j` of `T1` keeps the labels `1..j-1` on the first `j-1` leaves of
//! `T1`, sends the first leaf of `T2` to `j`, and distributes the remaining
//! labels over the tail leaves of both trees preserving each tree's internal
//! order.  The relabeling is therefore determined by the sorted set of
//! labels given to `T2`'s leaves, which must contain `j` as its minimum.
//! Every such choice yields a valid shuffle tree; no straightening is ever
//! required after grafting.

use crate::error::{Error, Result};
use crate::sig::{ShuffleGenId, ShuffleSignature, SwapBehavior};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Leaf(u32),
    Vertex(ShuffleGenId, Vec<Node>),
}

impl Node {
    pub fn min_label(&self) -> u32 {
        match self {
            Node::Leaf(l) => *l,
            Node::Vertex(_, children) => children[0].min_label(),
        }
    }

    /// Minimum over all leaves, correct even before children are sorted.
    fn min_label_unsorted(&self) -> u32 {
        match self {
            Node::Leaf(l) => *l,
            Node::Vertex(_, children) => {
                children.iter().map(|c| c.min_label_unsorted()).min().unwrap()
            }
        }
    }

    fn collect_labels(&self, out: &mut Vec<u32>) {
        match self {
            Node::Leaf(l) => out.push(*l),
            Node::Vertex(_, children) => {
                for c in children {
                    c.collect_labels(out);
                }
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Node::Leaf(_) => 1,
            Node::Vertex(_, children) => children.iter().map(|c| c.leaf_count()).sum(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            Node::Leaf(_) => 0,
            Node::Vertex(_, children) => {
                1 + children.iter().map(|c| c.vertex_count()).sum::<usize>()
            }
        }
    }

    fn relabel(&mut self, map: &impl Fn(u32) -> u32) {
        match self {
            Node::Leaf(l) => *l = map(*l),
            Node::Vertex(_, children) => {
                for c in children {
                    c.relabel(map);
                }
            }
        }
    }

    fn shuffle_condition_holds(&self) -> bool {
        match self {
            Node::Leaf(_) => true,
            Node::Vertex(_, children) => {
                let mins: Vec<u32> = children.iter().map(|c| c.min_label()).collect();
                mins.windows(2).all(|w| w[0] < w[1])
                    && children.iter().all(|c| c.shuffle_condition_holds())
            }
        }
    }
}

/// An immutable, canonical shuffle tree monomial.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ShuffleTreeMonomial {
    arity: usize,
    node: Node,
}

impl ShuffleTreeMonomial {
    /// The identity: a bare leaf of arity 1.
    pub fn identity() -> Self {
        ShuffleTreeMonomial { arity: 1, node: Node::Leaf(1) }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.node, Node::Leaf(_))
    }

    /// Validates a raw node as a canonical monomial: child counts match the
    /// generator arities, leaf labels are exactly `1..=n`, and the shuffle
    /// condition holds at every vertex.
    pub fn new(node: Node, sig: &ShuffleSignature) -> Result<Self> {
        validate_shape(&node, sig)?;
        let mut labels = Vec::new();
        node.collect_labels(&mut labels);
        let n = labels.len();
        let mut sorted = labels.clone();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::RepeatedLeafLabel(w[0]));
            }
        }
        if sorted.first() != Some(&1) || sorted.last() != Some(&(n as u32)) {
            return Err(Error::BadLeafLabels { expected: n, found: sorted });
        }
        if !node.shuffle_condition_holds() {
            return Err(Error::ShuffleCondition);
        }
        Ok(ShuffleTreeMonomial { arity: n, node })
    }

    /// Wraps a node known to be canonical (built from pieces of validated
    /// monomials by operations that provably preserve the invariants).
    pub(crate) fn new_unchecked(arity: usize, node: Node) -> Self {
        debug_assert!(node.shuffle_condition_holds());
        debug_assert_eq!(node.leaf_count(), arity);
        ShuffleTreeMonomial { arity, node }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn vertex_count(&self) -> usize {
        self.node.vertex_count()
    }

    /// Total filtration weight: the sum of the originating symbols' weights
    /// over all internal vertices.
    pub fn weight(&self, sig: &ShuffleSignature) -> u64 {
        fn go(node: &Node, sig: &ShuffleSignature) -> u64 {
            match node {
                Node::Leaf(_) => 0,
                Node::Vertex(g, children) => {
                    sig.origin_symbol(*g).filtration_weight
                        + children.iter().map(|c| go(c, sig)).sum::<u64>()
                }
            }
        }
        go(&self.node, sig)
    }

    /// Paths (child-slot sequences from the root) of all internal vertices,
    /// in preorder.
    pub fn vertex_paths(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        fn go(node: &Node, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if let Node::Vertex(_, children) = node {
                out.push(path.clone());
                for (i, c) in children.iter().enumerate() {
                    path.push(i);
                    go(c, path, out);
                    path.pop();
                }
            }
        }
        go(&self.node, &mut Vec::new(), &mut out);
        out
    }

    pub fn subtree(&self, path: &[usize]) -> Option<&Node> {
        let mut node = &self.node;
        for &slot in path {
            match node {
                Node::Vertex(_, children) => node = children.get(slot)?,
                Node::Leaf(_) => return None,
            }
        }
        Some(node)
    }

    /// Canonical text form, e.g. `o(o(1,2),3)`.
    pub fn to_text(&self, sig: &ShuffleSignature) -> String {
        fn go(node: &Node, sig: &ShuffleSignature, out: &mut String) {
            match node {
                Node::Leaf(l) => out.push_str(&l.to_string()),
                Node::Vertex(g, children) => {
                    out.push_str(&sig.get(*g).name);
                    out.push('(');
                    for (i, c) in children.iter().enumerate() {
                        if i > 0 {
                            out.push(',');
                        }
                        go(c, sig, out);
                    }
                    out.push(')');
                }
            }
        }
        let mut s = String::new();
        go(&self.node, sig, &mut s);
        s
    }

    /// Parses the canonical text form.  The input must already be canonical:
    /// labels `1..=n` and the shuffle condition are enforced.
    pub fn parse_text(s: &str, sig: &ShuffleSignature) -> Result<Self> {
        let bytes = s.as_bytes();
        let mut pos = 0usize;
        let node = parse_node(s, bytes, &mut pos, sig)?;
        skip_ws(bytes, &mut pos);
        if pos != bytes.len() {
            return Err(Error::Parse { at: pos, msg: "trailing input".into() });
        }
        ShuffleTreeMonomial::new(node, sig)
    }

    /// Nested-array JSON form, e.g. `["o",["o",1,2],3]`.
    pub fn to_json(&self, sig: &ShuffleSignature) -> Value {
        fn go(node: &Node, sig: &ShuffleSignature) -> Value {
            match node {
                Node::Leaf(l) => Value::from(*l),
                Node::Vertex(g, children) => {
                    let mut arr = vec![Value::from(sig.get(*g).name.clone())];
                    arr.extend(children.iter().map(|c| go(c, sig)));
                    Value::Array(arr)
                }
            }
        }
        go(&self.node, sig)
    }

    pub fn from_json(v: &Value, sig: &ShuffleSignature) -> Result<Self> {
        fn go(v: &Value, sig: &ShuffleSignature) -> Result<Node> {
            match v {
                Value::Number(n) => {
                    let l = n
                        .as_u64()
                        .ok_or_else(|| Error::Invalid(format!("bad leaf label {n}")))?;
                    Ok(Node::Leaf(l as u32))
                }
                Value::Array(arr) => {
                    let name = arr
                        .first()
                        .and_then(|x| x.as_str())
                        .ok_or_else(|| Error::Invalid("vertex array must start with a generator name".into()))?;
                    let gen = sig.by_name(name)?;
                    let children: Result<Vec<Node>> =
                        arr[1..].iter().map(|c| go(c, sig)).collect();
                    Ok(Node::Vertex(gen.id, children?))
                }
                other => Err(Error::Invalid(format!("bad monomial JSON: {other}"))),
            }
        }
        ShuffleTreeMonomial::new(go(v, sig)?, sig)
    }
}

fn validate_shape(node: &Node, sig: &ShuffleSignature) -> Result<()> {
    if let Node::Vertex(g, children) = node {
        if *g >= sig.len() {
            return Err(Error::UnknownGenerator(format!("#{g}")));
        }
        let gen = sig.get(*g);
        if children.len() != gen.arity {
            return Err(Error::ChildCountMismatch {
                name: gen.name.clone(),
                arity: gen.arity,
                got: children.len(),
            });
        }
        for c in children {
            validate_shape(c, sig)?;
        }
    }
    Ok(())
}

fn skip_ws(bytes: &[u8], pos: &mut usize) {
    while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
}

fn parse_node(s: &str, bytes: &[u8], pos: &mut usize, sig: &ShuffleSignature) -> Result<Node> {
    skip_ws(bytes, pos);
    let start = *pos;
    if start >= bytes.len() {
        return Err(Error::Parse { at: start, msg: "unexpected end of input".into() });
    }
    if bytes[start].is_ascii_digit() {
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        let label: u32 = s[start..*pos]
            .parse()
            .map_err(|_| Error::Parse { at: start, msg: "bad leaf label".into() })?;
        return Ok(Node::Leaf(label));
    }
    if !(bytes[start].is_ascii_alphabetic() || bytes[start] == b'_') {
        return Err(Error::Parse { at: start, msg: "expected generator or leaf".into() });
    }
    while *pos < bytes.len()
        && (bytes[*pos].is_ascii_alphanumeric() || bytes[*pos] == b'_' || bytes[*pos] == b'\'')
    {
        *pos += 1;
    }
    let name = &s[start..*pos];
    let gen = sig.by_name(name)?;
    skip_ws(bytes, pos);
    if *pos >= bytes.len() || bytes[*pos] != b'(' {
        return Err(Error::Parse { at: *pos, msg: format!("expected `(` after `{name}`") });
    }
    *pos += 1;
    let mut children = Vec::new();
    loop {
        children.push(parse_node(s, bytes, pos, sig)?);
        skip_ws(bytes, pos);
        match bytes.get(*pos) {
            Some(b',') => {
                *pos += 1;
            }
            Some(b')') => {
                *pos += 1;
                break;
            }
            _ => return Err(Error::Parse { at: *pos, msg: "expected `,` or `)`".into() }),
        }
    }
    Ok(Node::Vertex(gen.id, children))
}

/// Straightens a planar tree with arbitrary distinct leaf labels into a
/// canonical monomial, returning the sign produced by vertex symmetries.
///
/// Children are sorted recursively by minimal leaf label.  A symmetric
/// vertex reorders with sign `+1`, an antisymmetric one contributes the sign
/// of the sorting permutation, and a binary no-symmetry vertex toggles to
/// its partner generator when its children swap.  Leaf labels are finally
/// renumbered order-preservingly to `1..=n`.
pub fn straighten(tree: &Node, sig: &ShuffleSignature) -> Result<(i8, ShuffleTreeMonomial)> {
    validate_shape(tree, sig)?;
    let mut labels = Vec::new();
    tree.collect_labels(&mut labels);
    let mut sorted = labels.clone();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(Error::RepeatedLeafLabel(w[0]));
        }
    }
    let mut node = tree.clone();
    node.relabel(&|l| (sorted.binary_search(&l).unwrap() + 1) as u32);
    let sign = sort_children(&mut node, sig);
    let arity = sorted.len();
    debug_assert!(node.shuffle_condition_holds());
    Ok((sign, ShuffleTreeMonomial { arity, node }))
}

fn sort_children(node: &mut Node, sig: &ShuffleSignature) -> i8 {
    match node {
        Node::Leaf(_) => 1,
        Node::Vertex(g, children) => {
            let mut sign = 1i8;
            for c in children.iter_mut() {
                sign *= sort_children(c, sig);
            }
            let mins: Vec<u32> = children.iter().map(|c| c.min_label_unsorted()).collect();
            let mut order: Vec<usize> = (0..children.len()).collect();
            order.sort_by_key(|&i| mins[i]);
            if order.iter().enumerate().any(|(i, &o)| i != o) {
                match sig.get(*g).swap {
                    SwapBehavior::Signed { antisymmetric } => {
                        if antisymmetric && permutation_sign(&order) < 0 {
                            sign = -sign;
                        }
                    }
                    SwapBehavior::Partner { other } => {
                        // binary: the only non-identity reordering is the swap
                        *g = other;
                    }
                }
                let mut sorted_children = Vec::with_capacity(children.len());
                for &i in &order {
                    sorted_children.push(children[i].clone());
                }
                *children = sorted_children;
            }
            sign
        }
    }
}

fn permutation_sign(perm: &[usize]) -> i8 {
    let mut sign = 1i8;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// Applies a permutation of `1..=n` to the leaf labels (label `i` becomes
/// `perm[i-1]`) and straightens.
pub fn apply_permutation(
    m: &ShuffleTreeMonomial,
    perm: &[u32],
    sig: &ShuffleSignature,
) -> Result<(i8, ShuffleTreeMonomial)> {
    let n = m.arity();
    if perm.len() != n {
        return Err(Error::BadPermutation(n));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p == 0 || p as usize > n || seen[p as usize - 1] {
            return Err(Error::BadPermutation(n));
        }
        seen[p as usize - 1] = true;
    }
    let mut node = m.node.clone();
    node.relabel(&|l| perm[l as usize - 1]);
    straighten(&node, sig)
}

/// Grafts `t2` onto leaf `j` (1-based) of `t1`.  `block` is the sorted list
/// of labels the leaves of `t2` receive in the composite; it must have
/// minimum `j` and length `t2.arity()`.  The remaining labels go to the
/// other leaves of `t1` in order.
pub fn compose(
    t1: &ShuffleTreeMonomial,
    j: usize,
    t2: &ShuffleTreeMonomial,
    block: &[u32],
    sig: &ShuffleSignature,
) -> Result<ShuffleTreeMonomial> {
    let m = t1.arity();
    let k = t2.arity();
    let n = m + k - 1;
    if j == 0 || j > m {
        return Err(Error::InvalidLeafIndex { index: j, arity: m });
    }
    if block.len() != k {
        return Err(Error::BadRelabeling(format!("block has {} labels, need {k}", block.len())));
    }
    if block.first() != Some(&(j as u32)) {
        return Err(Error::BadRelabeling(format!("block must have minimum {j}")));
    }
    for w in block.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::BadRelabeling("block labels must strictly increase".into()));
        }
    }
    if block[k - 1] as usize > n {
        return Err(Error::BadRelabeling(format!("label {} exceeds arity {n}", block[k - 1])));
    }
    // labels for t1's leaves other than j, in ascending old-label order
    let in_block = {
        let mut v = vec![false; n + 1];
        for &b in block {
            v[b as usize] = true;
        }
        v
    };
    let remaining: Vec<u32> = (1..=n as u32).filter(|&l| !in_block[l as usize]).collect();
    debug_assert_eq!(remaining.len(), m - 1);
    let t1_map = |l: u32| -> u32 {
        let idx = if (l as usize) < j { l as usize - 1 } else { l as usize - 2 };
        remaining[idx]
    };
    let mut t2_node = t2.node.clone();
    t2_node.relabel(&|l| block[l as usize - 1]);
    fn graft(node: &Node, j: u32, replacement: &Node, map: &impl Fn(u32) -> u32) -> Node {
        match node {
            Node::Leaf(l) if *l == j => replacement.clone(),
            Node::Leaf(l) => Node::Leaf(map(*l)),
            Node::Vertex(g, children) => Node::Vertex(
                *g,
                children.iter().map(|c| graft(c, j, replacement, map)).collect(),
            ),
        }
    }
    let node = graft(&t1.node, j as u32, &t2_node, &t1_map);
    debug_assert!(node.shuffle_condition_holds());
    let _ = sig;
    Ok(ShuffleTreeMonomial { arity: n, node })
}

/// All composites of `t2` into leaf `j` of `t1`, over every admissible
/// relabeling, in a deterministic order and without duplicates.
pub fn enumerate_compositions(
    t1: &ShuffleTreeMonomial,
    j: usize,
    t2: &ShuffleTreeMonomial,
    sig: &ShuffleSignature,
) -> Result<Vec<ShuffleTreeMonomial>> {
    let m = t1.arity();
    let k = t2.arity();
    if j == 0 || j > m {
        return Err(Error::InvalidLeafIndex { index: j, arity: m });
    }
    let n = m + k - 1;
    let mut out = Vec::new();
    for tail in combinations(&((j + 1)..=n).map(|x| x as u32).collect::<Vec<_>>(), k - 1) {
        let mut block = Vec::with_capacity(k);
        block.push(j as u32);
        block.extend(tail);
        out.push(compose(t1, j, t2, &block, sig)?);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// All shuffles of the tail labels: `choose(pool, r)` in lexicographic order.
pub(crate) fn combinations(pool: &[u32], r: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..r).collect();
    if r > pool.len() {
        return out;
    }
    loop {
        out.push(idx.iter().map(|&i| pool[i]).collect());
        // advance
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + pool.len() - r {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Enumerates all monomials of arity `n` over the signature, in a
/// deterministic order.  Signatures with unary generators are rejected:
/// their components are infinite-dimensional.
pub fn enumerate_monomials(sig: &ShuffleSignature, n: usize) -> Result<Vec<ShuffleTreeMonomial>> {
    for g in sig.gens() {
        if g.arity == 1 {
            return Err(Error::UnaryEnumeration(g.name.clone()));
        }
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let labels: Vec<u32> = (1..=n as u32).collect();
    let nodes = gen_nodes(sig, &labels);
    Ok(nodes
        .into_iter()
        .map(|node| ShuffleTreeMonomial { arity: n, node })
        .collect())
}

fn gen_nodes(sig: &ShuffleSignature, labels: &[u32]) -> Vec<Node> {
    if labels.len() == 1 {
        return vec![Node::Leaf(labels[0])];
    }
    let mut out = Vec::new();
    for g in sig.gens() {
        let k = g.arity;
        if k < 2 || k > labels.len() {
            continue;
        }
        for blocks in ordered_partitions(labels, k) {
            let per_block: Vec<Vec<Node>> = blocks.iter().map(|b| gen_nodes(sig, b)).collect();
            let mut choice = vec![0usize; k];
            'outer: loop {
                let children: Vec<Node> =
                    (0..k).map(|i| per_block[i][choice[i]].clone()).collect();
                out.push(Node::Vertex(g.id, children));
                // odometer
                let mut i = k;
                loop {
                    if i == 0 {
                        break 'outer;
                    }
                    i -= 1;
                    choice[i] += 1;
                    if choice[i] < per_block[i].len() {
                        break;
                    }
                    choice[i] = 0;
                }
            }
        }
    }
    out
}

/// Ordered partitions of a sorted label set into `k` nonempty blocks with
/// strictly increasing minima: block 1 takes the global minimum, block 2 the
/// minimum of the rest, and so on.
fn ordered_partitions(labels: &[u32], k: usize) -> Vec<Vec<Vec<u32>>> {
    if k == 1 {
        return vec![vec![labels.to_vec()]];
    }
    let mut out = Vec::new();
    let rest = &labels[1..];
    // block 1 = labels[0] plus any subset of the rest leaving >= k-1 labels
    let max_extra = rest.len() - (k - 1);
    for size in 0..=max_extra {
        for extra in combinations(rest, size) {
            let mut b1 = Vec::with_capacity(size + 1);
            b1.push(labels[0]);
            b1.extend(&extra);
            let remaining: Vec<u32> =
                rest.iter().copied().filter(|l| !extra.contains(l)).collect();
            for mut tail in ordered_partitions(&remaining, k - 1) {
                let mut blocks = Vec::with_capacity(k);
                blocks.push(b1.clone());
                blocks.append(&mut tail);
                out.push(blocks);
            }
        }
    }
    out
}
