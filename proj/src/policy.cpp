#include <cctype>
#include <cmath>
#include <sstream>

#include "filippov/errors.hpp"
#include "filippov/integrator.hpp"

namespace filippov {

std::string to_string(Choice c) {
  switch (c) {
    case Choice::X: return "X";
    case Choice::Y: return "Y";
    case Choice::Slide: return "S";
    case Choice::Stay: return "T";
  }
  return "?";
}

std::vector<Option> SigmaSite::options() const {
  std::vector<Option> out;
  if (canX) out.push_back({Choice::X, 0});
  if (canY) out.push_back({Choice::Y, 0});
  for (const auto& w : slides) out.push_back({Choice::Slide, w.dir});
  if (canStay) out.push_back({Choice::Stay, 0});
  return out;
}

Policy Policy::always_x() {
  Policy p;
  p.kind_ = Kind::AlwaysX;
  return p;
}

Policy Policy::always_y() {
  Policy p;
  p.kind_ = Kind::AlwaysY;
  return p;
}

Policy Policy::stay_sliding() {
  Policy p;
  p.kind_ = Kind::StaySliding;
  return p;
}

Policy Policy::seeded_random(std::uint64_t seed) {
  Policy p;
  p.kind_ = Kind::SeededRandom;
  p.seed_ = seed;
  p.rng_.seed(seed);
  return p;
}

Policy Policy::scripted(const std::string& script) {
  Policy p;
  p.kind_ = Kind::Scripted;
  p.text_ = script;
  std::size_t i = 0;
  while (i < script.size()) {
    const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(script[i])));
    if (c == ',' || c == ' ' || c == ';' || c == '\t') {
      ++i;
      continue;
    }
    Token tok{};
    if (c == 'X') tok.choice = Choice::X;
    else if (c == 'Y') tok.choice = Choice::Y;
    else if (c == 'S') tok.choice = Choice::Slide;
    else if (c == 'T') tok.choice = Choice::Stay;
    else throw ConfigError(std::string("bad script token '") + script[i] + "'");
    ++i;
    if (i < script.size() && script[i] == '@') {
      if (tok.choice != Choice::X && tok.choice != Choice::Y)
        throw ConfigError("only X@s and Y@s take an exit parameter");
      ++i;
      std::size_t used = 0;
      try {
        tok.at = std::stod(script.substr(i), &used);
      } catch (const std::exception&) {
        throw ConfigError("bad exit parameter in script '" + script + "'");
      }
      i += used;
    }
    p.script_.push_back(tok);
  }
  if (p.script_.empty()) throw ConfigError("empty policy script");
  return p;
}

Policy Policy::parse(const std::string& text, std::uint64_t seed) {
  if (text == "always-x") return always_x();
  if (text == "always-y") return always_y();
  if (text == "stay-sliding") return stay_sliding();
  if (text == "random") return seeded_random(seed);
  return scripted(text);
}

std::string Policy::describe() const {
  switch (kind_) {
    case Kind::AlwaysX: return "always-x";
    case Kind::AlwaysY: return "always-y";
    case Kind::StaySliding: return "stay-sliding";
    case Kind::Scripted: return "script:" + text_;
    case Kind::SeededRandom: return "random:" + std::to_string(seed_);
  }
  return "?";
}

double Policy::uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

Decision Policy::by_order(const SigmaSite& site, std::initializer_list<Choice> order) const {
  const auto opts = site.options();
  for (Choice c : order)
    for (const auto& o : opts)
      if (o.choice == c) return {o, std::nullopt};
  if (opts.empty()) throw DeadEnd("no legal continuation");
  return {opts.front(), std::nullopt};
}

Decision Policy::choose(const SigmaSite& site) {
  const auto opts = site.options();
  if (opts.empty()) throw DeadEnd("no legal continuation");
  switch (kind_) {
    case Kind::AlwaysX: return by_order(site, {Choice::X, Choice::Y, Choice::Slide, Choice::Stay});
    case Kind::AlwaysY: return by_order(site, {Choice::Y, Choice::X, Choice::Slide, Choice::Stay});
    case Kind::StaySliding:
      return by_order(site, {Choice::Slide, Choice::Stay, Choice::X, Choice::Y});
    case Kind::Scripted: {
      const Token tok = script_[pos_ % script_.size()];
      ++pos_;
      if (tok.at) {
        const Side side = tok.choice == Choice::X ? Side::X : Side::Y;
        const double target = *tok.at;
        for (const auto& w : site.slides) {
          if (w.kind != RegionKind::Escaping) continue;
          const double ahead = (target - site.loc.s) * w.dir;
          const double room = (w.s_end - site.loc.s) * w.dir;
          if (ahead > 0 && ahead < room) return {{Choice::Slide, w.dir}, ExitPlan{side, target}};
        }
      }
      for (const auto& o : opts)
        if (o.choice == tok.choice) return {o, std::nullopt};
      return by_order(site, {Choice::Slide, Choice::Stay, Choice::X, Choice::Y});
    }
    case Kind::SeededRandom: {
      const std::size_t k =
          std::min(opts.size() - 1, static_cast<std::size_t>(uniform() * opts.size()));
      const Option o = opts[k];
      if (o.choice == Choice::Slide) {
        for (const auto& w : site.slides) {
          if (w.dir != o.dir || w.kind != RegionKind::Escaping) continue;
          const Side side = uniform() < 0.5 ? Side::X : Side::Y;
          const double len = (w.s_end - site.loc.s) * w.dir;
          const double margin = 1e-6 * len;
          const double u = uniform();
          const double s = site.loc.s + w.dir * (margin + u * (len - 2 * margin));
          return {o, ExitPlan{side, s}};
        }
      }
      return {o, std::nullopt};
    }
  }
  return {opts.front(), std::nullopt};
}

}  // namespace filippov
