#pragma once

// Readable gtest output for library types.

#include <contlogic/contlogic.hpp>

#include <ostream>

namespace contlogic {

inline void PrintTo(const Formula& f, std::ostream* os) { *os << print_formula(f); }
inline void PrintTo(const Sentence& s, std::ostream* os) { *os << print_sentence(s); }
inline void PrintTo(ErrorKind k, std::ostream* os) { *os << to_string(k); }
inline void PrintTo(const Structure& m, std::ostream* os) { *os << "\n" << print_structure(m); }
inline void PrintTo(const Vocabulary& v, std::ostream* os) {
  for (const auto& [name, sym] : v) *os << name << "/" << sym.arity << " ";
}

}  // namespace contlogic

namespace boost::multiprecision {

inline void PrintTo(const contlogic::Rational& r, std::ostream* os) { *os << contlogic::to_string(r); }

}  // namespace boost::multiprecision
