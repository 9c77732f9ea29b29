use super::field::Field;
use crate::error::FieldError;

/// The finite set `K^dim` for a finite field `K`, enumerated in base-`q`
/// order with coordinate 0 as the least significant digit.
#[derive(Debug, Clone)]
pub struct FiniteSpace<K: Field> {
    field: K,
    dim: usize,
    q: u64,
    size: usize,
}

/// Hard cap on enumerated carriers; anything larger is not desk scale.
pub const MAX_CARRIER: u64 = 1 << 20;

impl<K: Field> FiniteSpace<K> {
    pub fn new(field: &K, dim: usize) -> Result<Self, FieldError> {
        let q = field.order().ok_or(FieldError::InfiniteCarrier)?;
        let mut size: u64 = 1;
        for _ in 0..dim {
            size = size.checked_mul(q).filter(|&s| s <= MAX_CARRIER).ok_or(FieldError::CarrierTooLarge)?;
        }
        Ok(FiniteSpace { field: field.clone(), dim, q, size: size as usize })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn vector(&self, mut index: usize) -> Vec<K::Elem> {
        let mut v = Vec::with_capacity(self.dim);
        for _ in 0..self.dim {
            v.push(self.field.element_at(index as u64 % self.q));
            index /= self.q as usize;
        }
        v
    }

    pub fn index(&self, v: &[K::Elem]) -> usize {
        debug_assert_eq!(v.len(), self.dim);
        let mut idx = 0u64;
        for x in v.iter().rev() {
            idx = idx * self.q + self.field.index_of(x);
        }
        idx as usize
    }

    pub fn vectors(&self) -> impl Iterator<Item = Vec<K::Elem>> + '_ {
        (0..self.size).map(move |i| self.vector(i))
    }
}
