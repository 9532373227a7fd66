#pragma once

#include "ledger/chain.hpp"

#include <iosfwd>
#include <string>

namespace teevil::ledger {

/// Line-oriented chain dump. Field order (one record per block):
///
///   teevil-chain v1 difficulty=<bits> blocks=<count>
///   block <height> <prev_hex> <payload_hex> <pow_nonce> <own_hex> <tx_count>
///   tx <tx_id_hex> <memo|-> <input_count> <output_count>
///   in <note_tx_id_hex> <note_index> <witness_hex>
///   out <kind> <address> <value_units>
///
/// `tx` lines follow their block line; `in` and `out` lines follow their tx.
void dump_chain(const Chain& chain, std::ostream& out);
std::string dump_chain(const Chain& chain);

/// Parses and fully re-validates a dump (proof of work, links, payload
/// commitments, tx ids, balances, double spends). Witnesses are checked only
/// when `keys` is given. Throws Error{malformed_chain} or
/// Error{invalid_transaction}.
Chain restore_chain(std::istream& in, const KeyRegistry* keys = nullptr);
Chain restore_chain(const std::string& text, const KeyRegistry* keys = nullptr);

} // namespace teevil::ledger
