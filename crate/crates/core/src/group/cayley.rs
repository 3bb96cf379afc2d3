use std::collections::HashMap;

use super::GroupError;

/// A finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyTable {
    names: Vec<String>,
    table: Vec<Vec<u32>>,
    identity: u32,
    inverses: Vec<u32>,
    index: HashMap<String, u32>,
}

impl CayleyTable {
    /// Validates closure, identity, inverses and associativity (exhaustively).
    pub fn new(names: Vec<String>, table: Vec<Vec<u32>>) -> Result<CayleyTable, GroupError> {
        let n = names.len();
        if n == 0 {
            return Err(GroupError::InvalidTable("empty table".into()));
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(GroupError::InvalidTable(format!("table must be {n}x{n}")));
        }
        if table.iter().flatten().any(|&x| x as usize >= n) {
            return Err(GroupError::InvalidTable("entry outside the element set".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] as usize == x && table[x][e] as usize == x))
            .ok_or_else(|| GroupError::InvalidTable("no identity element".into()))? as u32;
        let mut inverses = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| GroupError::InvalidTable(format!("{} has no inverse", names[a])))?;
            inverses.push(inv as u32);
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b] as usize;
                for c in 0..n {
                    let bc = table[b][c] as usize;
                    if table[ab][c] != table[a][bc] {
                        return Err(GroupError::InvalidTable(format!(
                            "not associative at ({}, {}, {})",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        let index: HashMap<String, u32> = names.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect();
        if index.len() != n {
            return Err(GroupError::InvalidTable("duplicate element names".into()));
        }
        Ok(CayleyTable { names, table, identity, inverses, index })
    }

    /// The cyclic group `Z/n` with elements named `0..n`.
    pub fn cyclic(n: u32) -> CayleyTable {
        let names = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        CayleyTable::new(names, table).expect("cyclic table is a group")
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize][b as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inverses[a as usize]
    }

    pub fn name(&self, a: u32) -> &str {
        &self.names[a as usize]
    }

    pub fn lookup(&self, name: &str) -> Option<u32> {
        self.index.get(name).copied()
    }
}
