// Copyright 2026 The Migrator Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

#include "migrator/program.hpp"
#include "migrator/schema.hpp"
#include "migrator/sketch.hpp"
#include "migrator/value.hpp"
#include "migrator/value_correspondence.hpp"

namespace migrator {

std::string_view to_string(ValueType type) {
  switch (type) {
    case ValueType::Int:
      return "int";
    case ValueType::Str:
      return "str";
    case ValueType::Bin:
      return "bin";
  }
  return "?";
}

std::optional<ValueType> Value::type() const {
  switch (data_.index()) {
    case 0:
      return ValueType::Int;
    case 1:
      return ValueType::Str;
    case 2:
      return ValueType::Bin;
    default:
      return std::nullopt;
  }
}

std::string Value::to_string() const {
  if (is_int()) return std::to_string(as_int());
  if (is_str()) {
    std::string out = "\"";
    for (char c : as_str()) {
      switch (c) {
        case '"':
          out += "\\\"";
          break;
        case '\\':
          out += "\\\\";
          break;
        case '\n':
          out += "\\n";
          break;
        default:
          out += c;
      }
    }
    return out + "\"";
  }
  if (is_bin()) {
    std::string out = "0x";
    char buf[3];
    for (auto byte : as_bin().data) {
      std::snprintf(buf, sizeof buf, "%02x", byte);
      out += buf;
    }
    return out;
  }
  return "#uid" + std::to_string(as_uid().tag);
}

// ---------------------------------------------------------------------------
// Schema

const Attribute* Table::find(std::string_view attr) const {
  for (const auto& a : attributes)
    if (a.name == attr) return &a;
  return nullptr;
}

int Table::index_of(std::string_view attr) const {
  for (std::size_t i = 0; i < attributes.size(); ++i)
    if (attributes[i].name == attr) return static_cast<int>(i);
  return -1;
}

const Attribute* Table::primary_key() const {
  for (const auto& a : attributes)
    if (a.key == KeyKind::PrimaryKey) return &a;
  return nullptr;
}

const Table* Schema::find_table(std::string_view name) const {
  for (const auto& t : tables_)
    if (t.name == name) return &t;
  return nullptr;
}

const Attribute* Schema::find(const QualifiedAttr& attr) const {
  const Table* t = find_table(attr.table);
  return t ? t->find(attr.name) : nullptr;
}

std::vector<QualifiedAttr> Schema::all_attributes() const {
  std::vector<QualifiedAttr> out;
  for (const auto& t : tables_)
    for (const auto& a : t.attributes) out.push_back(a.qualified());
  return out;
}

std::vector<std::string> Schema::check() const {
  std::vector<std::string> errors;
  std::set<std::string> names;
  for (const auto& t : tables_) {
    if (!names.insert(t.name).second) errors.push_back("duplicate table " + t.name);
    std::set<std::string> attrs;
    int pks = 0;
    for (const auto& a : t.attributes) {
      if (!attrs.insert(a.name).second) errors.push_back("duplicate attribute " + t.name + "." + a.name);
      if (a.table != t.name) errors.push_back("attribute " + a.name + " tagged with wrong table " + a.table);
      if (a.key == KeyKind::PrimaryKey) ++pks;
    }
    if (pks > 1) errors.push_back("table " + t.name + " has more than one primary key");
  }
  for (const auto& t : tables_) {
    for (const auto& a : t.attributes) {
      if (a.key != KeyKind::ForeignKey) continue;
      const Table* ref = find_table(a.references);
      if (!ref) {
        errors.push_back("foreign key " + t.name + "." + a.name + " references unknown table " + a.references);
        continue;
      }
      const Attribute* pk = ref->primary_key();
      if (!pk) {
        errors.push_back("foreign key " + t.name + "." + a.name + " references table " + a.references +
                         " without a primary key");
      } else if (pk->type != a.type) {
        errors.push_back("foreign key " + t.name + "." + a.name + " type differs from " + ref->name + "." +
                         pk->name);
      }
    }
  }
  return errors;
}

// ---------------------------------------------------------------------------
// Program

std::string_view to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Eq:
      return "=";
    case CmpOp::Ne:
      return "<>";
    case CmpOp::Lt:
      return "<";
    case CmpOp::Le:
      return "<=";
    case CmpOp::Gt:
      return ">";
    case CmpOp::Ge:
      return ">=";
  }
  return "?";
}

JoinChain JoinChain::table(std::string name) { return JoinChain{std::move(name)}; }

JoinChain JoinChain::join(JoinChain left, QualifiedAttr left_attr, JoinChain right, QualifiedAttr right_attr) {
  return JoinChain{Box<EquiJoin>(EquiJoin{std::move(left), std::move(left_attr), std::move(right),
                                          std::move(right_attr)})};
}

namespace {

void collect_tables(const JoinChain& join, std::vector<std::string>& out) {
  if (join.is_table()) {
    if (std::find(out.begin(), out.end(), join.table_name()) == out.end()) out.push_back(join.table_name());
    return;
  }
  collect_tables(join.equi().left, out);
  collect_tables(join.equi().right, out);
}

void collect_conditions(const JoinChain& join, std::vector<std::pair<QualifiedAttr, QualifiedAttr>>& out) {
  if (join.is_table()) return;
  collect_conditions(join.equi().left, out);
  collect_conditions(join.equi().right, out);
  out.emplace_back(join.equi().left_attr, join.equi().right_attr);
}

}  // namespace

std::vector<std::string> tables_of(const JoinChain& join) {
  std::vector<std::string> out;
  collect_tables(join, out);
  return out;
}

std::vector<std::pair<QualifiedAttr, QualifiedAttr>> join_conditions(const JoinChain& join) {
  std::vector<std::pair<QualifiedAttr, QualifiedAttr>> out;
  collect_conditions(join, out);
  return out;
}

std::string to_string(const JoinChain& join) {
  if (join.is_table()) return join.table_name();
  const auto& e = join.equi();
  std::string right = e.right.is_table() ? to_string(e.right) : "(" + to_string(e.right) + ")";
  return to_string(e.left) + " join " + right + " on " + e.left_attr.to_string() + " = " + e.right_attr.to_string();
}

Predicate make_cmp(QualifiedAttr lhs, CmpOp op, Operand rhs) {
  return Predicate{Predicate::Cmp{std::move(lhs), op, std::move(rhs)}};
}
Predicate make_and(Predicate lhs, Predicate rhs) { return Predicate{Predicate::And{std::move(lhs), std::move(rhs)}}; }
Predicate make_or(Predicate lhs, Predicate rhs) { return Predicate{Predicate::Or{std::move(lhs), std::move(rhs)}}; }
Predicate make_not(Predicate operand) { return Predicate{Predicate::Not{std::move(operand)}}; }

const Function* Program::find(std::string_view name) const {
  for (const auto& f : functions)
    if (f.name == name) return &f;
  return nullptr;
}

// ---------------------------------------------------------------------------
// ValueCorrespondence

void ValueCorrespondence::add(const QualifiedAttr& source, const QualifiedAttr& target) {
  auto& images = mapping_[source];
  if (std::find(images.begin(), images.end(), target) == images.end()) images.push_back(target);
}

void ValueCorrespondence::set(const QualifiedAttr& source, std::vector<QualifiedAttr> targets) {
  mapping_[source] = std::move(targets);
}

const std::vector<QualifiedAttr>& ValueCorrespondence::images(const QualifiedAttr& source) const {
  static const std::vector<QualifiedAttr> kEmpty;
  auto it = mapping_.find(source);
  return it == mapping_.end() ? kEmpty : it->second;
}

ValueCorrespondence ValueCorrespondence::identity(const Schema& schema) {
  ValueCorrespondence corr;
  for (const auto& a : schema.all_attributes()) corr.add(a, a);
  return corr;
}

std::vector<std::string> ValueCorrespondence::check(const Schema& source, const Schema& target) const {
  std::vector<std::string> errors;
  for (const auto& [src, images] : mapping_) {
    const Attribute* s = source.find(src);
    if (!s) {
      errors.push_back("unknown source attribute " + src.to_string());
      continue;
    }
    for (const auto& img : images) {
      const Attribute* t = target.find(img);
      if (!t)
        errors.push_back("unknown target attribute " + img.to_string());
      else if (t->type != s->type)
        errors.push_back("type mismatch " + src.to_string() + " -> " + img.to_string());
    }
  }
  return errors;
}

std::string ValueCorrespondence::to_string() const {
  std::ostringstream out;
  for (const auto& [src, images] : mapping_)
    for (const auto& img : images) out << src.to_string() << " -> " << img.to_string() << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Sketch

std::size_t Hole::size() const {
  return std::visit(
      [](const auto& d) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(d)>, BoolDomain>)
          return 2;
        else
          return d.size();
      },
      domain);
}

std::uint64_t Sketch::naive_size() const {
  std::uint64_t total = 1;
  for (const auto& h : holes) {
    std::uint64_t n = h.size();
    if (n != 0 && total > std::numeric_limits<std::uint64_t>::max() / n) return std::numeric_limits<std::uint64_t>::max();
    total *= n;
  }
  return total;
}

}  // namespace migrator
