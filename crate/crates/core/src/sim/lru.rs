//! Array-backed LRU cache: a dense item-to-node slot map plus an intrusive
//! doubly-linked recency list over a fixed node arena. All operations are
//! O(1); items are indices in `0..universe`.

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy)]
struct Node {
    prev: u32,
    next: u32,
    item: u32,
}

#[derive(Debug)]
pub struct LruCache {
    slot: Vec<u32>,
    nodes: Vec<Node>,
    head: u32,
    tail: u32,
}

impl LruCache {
    pub fn new(capacity: usize, universe: usize) -> Self {
        assert!(capacity >= 1, "capacity must be at least 1");
        Self {
            slot: vec![NONE; universe],
            nodes: Vec::with_capacity(capacity.min(universe)),
            head: NONE,
            tail: NONE,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn capacity(&self) -> usize {
        self.nodes.capacity()
    }

    #[inline]
    fn unlink(&mut self, idx: u32) {
        let Node { prev, next, .. } = self.nodes[idx as usize];
        if prev != NONE {
            self.nodes[prev as usize].next = next;
        } else {
            self.head = next;
        }
        if next != NONE {
            self.nodes[next as usize].prev = prev;
        } else {
            self.tail = prev;
        }
    }

    #[inline]
    fn push_front(&mut self, idx: u32) {
        let old = self.head;
        self.nodes[idx as usize].prev = NONE;
        self.nodes[idx as usize].next = old;
        if old != NONE {
            self.nodes[old as usize].prev = idx;
        } else {
            self.tail = idx;
        }
        self.head = idx;
    }

    /// On a hit, refresh the item to most-recently-used and return true.
    #[inline]
    pub fn touch(&mut self, item: u32) -> bool {
        let idx = self.slot[item as usize];
        if idx == NONE {
            return false;
        }
        if self.head != idx {
            self.unlink(idx);
            self.push_front(idx);
        }
        true
    }

    /// Insert an absent item as most-recently-used, evicting the least
    /// recently used one if the cache is full.
    #[inline]
    pub fn insert(&mut self, item: u32) {
        debug_assert_eq!(self.slot[item as usize], NONE, "insert of a cached item");
        let idx = if self.nodes.len() < self.capacity() {
            self.nodes.push(Node { prev: NONE, next: NONE, item });
            (self.nodes.len() - 1) as u32
        } else {
            // Reuse the evicted tail node.
            let idx = self.tail;
            let victim = self.nodes[idx as usize].item;
            self.slot[victim as usize] = NONE;
            self.unlink(idx);
            self.nodes[idx as usize].item = item;
            idx
        };
        self.slot[item as usize] = idx;
        self.push_front(idx);
    }
}
