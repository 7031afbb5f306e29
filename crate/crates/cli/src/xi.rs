//! The `--xi` mini-language.
//!
//! A product of optionally powered atoms. An atom is a parenthesized sum of
//! terms `c x^n`, a coefficient list `[c0,c1,...,1]` (constant first), or
//! `poly(GF(2^k))[...]`. Elements are decimal encodings, `w`/`w2` for the cube
//! roots of unity, or `g`/`g^n` for powers of the primitive element.

use e1forge::gf2k::{FieldElement, FieldSpec};
use e1forge::polyfield::MonicPoly;

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
    field: FieldSpec,
}

pub fn parse_xi(text: &str, field: FieldSpec) -> Result<MonicPoly, String> {
    let cleaned: String = text
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| if c == '·' || c == '×' { '*' } else { c })
        .collect();
    if cleaned.is_empty() {
        return Err("empty polynomial".into());
    }
    let mut cur = Cursor {
        s: cleaned.as_bytes(),
        pos: 0,
        field,
    };
    let mut acc = MonicPoly::one(field);
    while cur.pos < cur.s.len() {
        if cur.eat(b'*') {
            continue;
        }
        let atom = cur.atom()?;
        let atom = if cur.eat(b'^') {
            atom.pow(cur.number()? as u32)
        } else {
            atom
        };
        acc = acc.mul(&atom);
    }
    Ok(acc)
}

impl Cursor<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), String> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(format!("expected '{}' at offset {}", c as char, self.pos))
        }
    }

    fn rest(&self) -> &str {
        std::str::from_utf8(&self.s[self.pos..]).unwrap_or("")
    }

    fn number(&mut self) -> Result<u64, String> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap_or("")
            .parse()
            .map_err(|_| format!("expected a number at offset {start}"))
    }

    fn cube_root(&self, square: bool) -> Result<FieldElement, String> {
        let n = self.field.size() - 1;
        if n % 3 != 0 {
            return Err(format!("{} has no cube roots of unity", self.field));
        }
        let w = self.field.primitive().pow(n / 3);
        Ok(if square { w * w } else { w })
    }

    fn element(&mut self) -> Result<Option<FieldElement>, String> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let v = self.number()?;
                self.field.elem(v).map(Some).map_err(|e| e.to_string())
            }
            Some(b'w') => {
                self.pos += 1;
                let square = self.eat(b'2');
                self.cube_root(square).map(Some)
            }
            Some(b'g') => {
                self.pos += 1;
                let e = if self.eat(b'^') { self.number()? } else { 1 };
                Ok(Some(self.field.primitive().pow(e)))
            }
            _ => Ok(None),
        }
    }

    fn atom(&mut self) -> Result<MonicPoly, String> {
        if self.rest().starts_with("poly(") {
            let close = self.rest().find(']').ok_or("unterminated poly(...)[...]")?;
            let text = self.rest()[..=close].to_string();
            self.pos += close + 1;
            let p: MonicPoly = text
                .parse()
                .map_err(|e: e1forge::PolyError| e.to_string())?;
            if p.field().degree() != self.field.degree() {
                return Err(format!("{text} is not over {}", self.field));
            }
            return p.rebase(self.field).map_err(|e| e.to_string());
        }
        if self.eat(b'[') {
            let mut full = Vec::new();
            loop {
                let c = self
                    .element()?
                    .ok_or_else(|| format!("expected a coefficient at offset {}", self.pos))?;
                full.push(c);
                if self.eat(b']') {
                    break;
                }
                self.expect(b',')?;
            }
            return MonicPoly::from_full(self.field, full).map_err(|e| e.to_string());
        }
        self.expect(b'(')?;
        let mut dense: Vec<FieldElement> = Vec::new();
        loop {
            let coeff = self.element()?;
            let mut power = 0;
            if self.eat(b'x') {
                power = if self.eat(b'^') {
                    self.number()? as usize
                } else {
                    1
                };
            } else if coeff.is_none() {
                return Err(format!("expected a term at offset {}", self.pos));
            }
            let coeff = coeff.unwrap_or_else(|| self.field.one());
            if dense.len() <= power {
                dense.resize(power + 1, self.field.zero());
            }
            dense[power] = dense[power] + coeff;
            if self.eat(b')') {
                break;
            }
            self.expect(b'+')?;
        }
        while dense.len() > 1 && dense.last().is_some_and(|c| c.is_zero()) {
            dense.pop();
        }
        if !dense.last().is_some_and(|c| c.is_one()) {
            return Err("factor is not monic".into());
        }
        MonicPoly::from_full(self.field, dense).map_err(|e| e.to_string())
    }
}
