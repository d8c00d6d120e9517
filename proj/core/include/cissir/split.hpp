#pragma once

#include "cissir/channel.hpp"
#include "cissir/codebook.hpp"

namespace cissir {

struct SplitGrams {
  CMat g_tx;  // N x N
  CMat g_rx;  // M x M
};

// g_tx = sum_i V_i S_i V_i^H, g_rx = sum_i U_i S_i U_i^H over the SVDs of each tap.
SplitGrams integral_split(const TappedSiChannel& channel);

// max_k sqrt(c_k^H G_rx c_k) * max_l sqrt(w_l^H G_tx w_l)
double split_bound(const Codebook& rx_cb, const Codebook& tx_cb, const SplitGrams& grams);

// Real quadratic form v^H G v with tiny negatives clamped to zero.
double quad_form(const CMat& g, const CVec& v);

}  // namespace cissir
