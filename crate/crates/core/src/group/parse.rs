//! Textual element syntax, one dialect per model.
//!
//! Free group: whitespace-separated letters with optional exponents,
//! `a b^-1 a^2`, multiplied left to right; letters `a..z` index the basis.
//! Free product: the same with factor letters `x y z w v u`. Lamplighter
//! tokens describe the canonical pair directly: `t^k` sets the cursor and
//! `l<pos>` / `l<pos>^v` set lamps at absolute positions, e.g. `t^2 l0 l3`.
//! `e` is the identity everywhere.

use num_bigint::BigInt;

use super::free_product::letter_factor;
use super::{FreeWord, GroupElement, GroupError, GroupModel, LampConfig, ProductWord};

struct Tokens<'a> {
    text: &'a str,
    pos: usize,
}

struct Token<'a> {
    text: &'a str,
    position: usize,
}

impl<'a> Iterator for Tokens<'a> {
    type Item = Token<'a>;

    fn next(&mut self) -> Option<Token<'a>> {
        let bytes = self.text.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= bytes.len() {
            return None;
        }
        let start = self.pos;
        while self.pos < bytes.len() && !bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        Some(Token {
            text: &self.text[start..self.pos],
            position: start,
        })
    }
}

fn err(position: usize, message: impl Into<String>) -> GroupError {
    GroupError::Parse {
        position,
        message: message.into(),
    }
}

/// Splits `a^-3` into (`a`, -3); a missing exponent means 1.
fn split_exponent<'a>(token: &Token<'a>) -> Result<(&'a str, BigInt), GroupError> {
    match token.text.split_once('^') {
        None => Ok((token.text, BigInt::from(1))),
        Some((base, exp)) => {
            let value: BigInt = exp
                .parse()
                .map_err(|_| err(token.position, format!("bad exponent `{exp}`")))?;
            Ok((base, value))
        }
    }
}

pub fn parse_element(model: &GroupModel, text: &str) -> Result<GroupElement, GroupError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(err(0, "empty element expression"));
    }
    if trimmed == "e" {
        return Ok(model.identity());
    }
    match model {
        GroupModel::Free { rank } => parse_free(*rank, text),
        GroupModel::Lamplighter { modulus } => parse_lamplighter(*modulus, text),
        GroupModel::FreeProduct { orders } => parse_product(orders, text),
    }
}

fn parse_free(rank: usize, text: &str) -> Result<GroupElement, GroupError> {
    let mut syllables = Vec::new();
    for token in (Tokens { text, pos: 0 }) {
        if token.text == "e" {
            continue;
        }
        let (base, exponent) = split_exponent(&token)?;
        let mut chars = base.chars();
        let letter = chars
            .next()
            .ok_or_else(|| err(token.position, "empty token"))?;
        if chars.next().is_some() || !letter.is_ascii_lowercase() {
            return Err(err(token.position, format!("bad generator `{base}`")));
        }
        let index = (letter as u8 - b'a') as usize;
        if index >= rank {
            return Err(err(
                token.position,
                format!("generator `{letter}` is outside rank {rank}"),
            ));
        }
        syllables.push((index, exponent));
    }
    Ok(GroupElement::Free(FreeWord::from_syllables(syllables)))
}

fn parse_lamplighter(modulus: u32, text: &str) -> Result<GroupElement, GroupError> {
    let mut cursor = BigInt::from(0);
    let mut lamps: Vec<(BigInt, u32)> = Vec::new();
    for token in (Tokens { text, pos: 0 }) {
        if token.text == "e" {
            continue;
        }
        let (base, exponent) = split_exponent(&token)?;
        if base == "t" {
            cursor += exponent;
        } else if let Some(pos_text) = base.strip_prefix('l') {
            let position: BigInt = pos_text
                .parse()
                .map_err(|_| err(token.position, format!("bad lamp position `{pos_text}`")))?;
            let value_signed: BigInt = exponent;
            let m = BigInt::from(modulus);
            let value = ((value_signed % &m) + &m) % &m;
            let value: u32 = value.try_into().expect("reduced mod m fits in u32");
            lamps.push((position, value));
        } else {
            return Err(err(token.position, format!("bad token `{}`", token.text)));
        }
    }
    Ok(GroupElement::Lamplighter(LampConfig::from_parts(
        lamps, cursor, modulus,
    )))
}

fn parse_product(orders: &[u32], text: &str) -> Result<GroupElement, GroupError> {
    let mut syllables = Vec::new();
    for token in (Tokens { text, pos: 0 }) {
        if token.text == "e" {
            continue;
        }
        let (base, exponent) = split_exponent(&token)?;
        let mut chars = base.chars();
        let letter = chars
            .next()
            .ok_or_else(|| err(token.position, "empty token"))?;
        if chars.next().is_some() {
            return Err(err(token.position, format!("bad generator `{base}`")));
        }
        let factor = letter_factor(letter)
            .ok_or_else(|| err(token.position, format!("unknown factor letter `{letter}`")))?;
        if factor >= orders.len() {
            return Err(err(
                token.position,
                format!("factor `{letter}` is outside this free product"),
            ));
        }
        let order = BigInt::from(orders[factor]);
        let reduced = ((exponent % &order) + &order) % &order;
        let reduced: u32 = reduced.try_into().expect("reduced mod order fits in u32");
        syllables.push((factor, reduced));
    }
    Ok(GroupElement::FreeProduct(ProductWord::from_syllables(
        syllables, orders,
    )))
}
