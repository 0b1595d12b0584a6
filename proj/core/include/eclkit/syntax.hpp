#pragma once

#include "eclkit/formula.hpp"
#include "eclkit/interval.hpp"
#include "eclkit/poly.hpp"
#include "eclkit/system.hpp"
#include "eclkit/term.hpp"

#include <string>

namespace eclkit {

/// Surface naming of variable indices.
///   XNumbered: x1, x2, ...
///   YFirst:    y, x1, x2, ...  (index 1 prints as y; used for augmented systems)
///   CNumbered: c1, c2, ...     (constraint formulas over named constants)
enum class VarNaming { XNumbered, YFirst, CNumbered };

/// Grammar (whitespace-insensitive, '#' starts a line comment):
///   term    := ('-')? prod (('+'|'-') prod)*
///   prod    := pow ('*' pow)*
///   pow     := atom ('^' NAT)?
///   atom    := INT | VAR | 'E' '(' term ')' | '(' term ')'
///   VAR     := 'x' NAT | 'y' | 'c' NAT
/// If 'y' occurs anywhere in the input, y denotes index 1 and xk denotes
/// index k+1; otherwise xk denotes index k. ck always denotes index k.
///
/// Formulas:
///   formula := conj ('|' conj)*
///   conj    := unary ('&' unary)*
///   unary   := '!' unary | '(' formula ')' | term REL term
///   REL     := '=' | '!=' | '<' | '<=' | '>' | '>='   ('>' forms swap sides)
ExpTerm parse_term(const std::string& text, VarNaming* naming_out = nullptr);

/// System text: optional first line "vars: n", then equations separated by
/// newlines or ';'. The equation count must equal the variable count.
KhovanskiiSystem parse_system(const std::string& text,
                              VarNaming* naming_out = nullptr,
                              const Limits& limits = {});

ConstraintFormula parse_formula(const std::string& text);

/// "[lo, hi]" with decimal endpoints, outward rounded.
Interval parse_interval(const std::string& text, Precision prec);
/// Semicolon-separated interval list: "[a,b]; [c,d]".
IntervalBox parse_box(const std::string& text, Precision prec);

std::string print_term(const ExpTerm& t, VarNaming naming = VarNaming::XNumbered);
std::string print_poly(const CanonicalPoly& p,
                       VarNaming naming = VarNaming::XNumbered);
/// "vars: n" header plus one equation per line.
std::string print_system(const KhovanskiiSystem& s,
                         VarNaming naming = VarNaming::XNumbered);
/// Equations joined by "; " without the header.
std::string print_system_inline(const KhovanskiiSystem& s,
                                VarNaming naming = VarNaming::XNumbered);
std::string print_formula(const ConstraintFormula& f,
                          VarNaming naming = VarNaming::CNumbered);

} // namespace eclkit
