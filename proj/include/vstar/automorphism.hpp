#pragma once

// Back-and-forth automorphisms: a handle owns a growing matched pair list
// with its certificate and answers image/preimage queries by extending the
// list through the forth/back recipes. Identity requests short-circuit.

#include <optional>
#include <string>
#include <vector>

#include "vstar/closure.hpp"
#include "vstar/generic.hpp"

namespace vstar {

class AutomorphismHandle {
 public:
  AutomorphismHandle(Chain& chain, Elem k, Elem l)
      : chain_(&chain), k_(k), l_(l), identity_(k == l) {
    chain.ensure_saturated(k);
    chain.condition().ensure_anchor(l);
    cert_.emplace(chain.condition(), std::vector<std::pair<Elem, Elem>>{{k, l}});
    if (!cert_->valid())
      throw CertificateInvalid("automorphism base pair rejected: " +
                               cert_->failure());
    chain.record("auto", {std::to_string(k), std::to_string(l)}, "");
  }

  Elem source() const { return k_; }
  Elem target() const { return l_; }
  const Certificate& certificate() const { return *cert_; }

  Elem image(Elem i) {
    Elem r = identity_ ? touch(i) : forth(i);
    chain_->record("auto_image",
                   {std::to_string(k_), std::to_string(l_), std::to_string(i)},
                   std::to_string(r));
    return r;
  }

  Elem preimage(Elem i) {
    Elem r;
    if (identity_) {
      r = touch(i);
    } else if (auto x = cert_->iso_inv(i)) {
      r = *x;
    } else {
      r = cert_->extend_back(i);
    }
    chain_->record("auto_preimage",
                   {std::to_string(k_), std::to_string(l_), std::to_string(i)},
                   std::to_string(r));
    return r;
  }

  // Run n fairness steps of the back-and-forth schedule: step 2t-1 puts w_t
  // in the domain, step 2t puts w_t in the image, over the fixed zigzag
  // enumeration, so both sides eventually exhaust the universe.
  void advance(int n) {
    for (int s = 0; s < n; ++s) {
      ++cursor_;
      Elem w = zigzag((cursor_ + 1) / 2);
      if (cursor_ % 2 == 1) {
        if (identity_) {
          touch(w);
        } else {
          forth(w);
          cert_->promote(w);
        }
      } else if (identity_) {
        touch(w);
      } else if (auto s = cert_->iso_inv(w)) {
        // already in the image as a side effect; record it as matched
        cert_->promote(*s);
      } else {
        cert_->extend_back(w);
      }
    }
    chain_->record("auto_advance",
                   {std::to_string(k_), std::to_string(l_), std::to_string(n)},
                   std::to_string(cursor_));
  }

  std::vector<std::pair<Elem, Elem>> matched() const {
    if (identity_) {
      std::vector<std::pair<Elem, Elem>> out;
      for (Elem x : touched_) out.push_back({x, x});
      return out;
    }
    return cert_->pairs();
  }

 private:
  Elem forth(Elem i) {
    if (auto y = cert_->iso(i)) return *y;
    auto r = meet_good2(chain_->condition(), *cert_, i);
    return *r.witness;
  }

  Elem touch(Elem i) {
    for (Elem x : touched_)
      if (x == i) return i;
    touched_.push_back(i);
    return i;
  }

  Chain* chain_;
  Elem k_, l_;
  bool identity_;
  std::optional<Certificate> cert_;
  std::vector<Elem> touched_;
  std::int64_t cursor_ = 0;
};

}  // namespace vstar
