#include "ledger/chain_io.hpp"

#include "common/error.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace teevil::ledger {

void dump_chain(const Chain& chain, std::ostream& out)
{
    out << "teevil-chain v1 difficulty=" << chain.difficulty_bits() << " blocks=" << chain.size() << '\n';
    for (const auto& block : chain.blocks()) {
        const BlockHeader& h = block->header;
        out << "block " << h.height << ' ' << h.prev_digest.hex() << ' ' << h.payload_digest.hex() << ' '
            << h.pow_nonce << ' ' << h.own_digest.hex() << ' ' << block->txs.size() << '\n';
        for (const auto& tx : block->txs) {
            out << "tx " << tx.tx_id.hex() << ' ' << (tx.memo.empty() ? "-" : tx.memo) << ' '
                << tx.inputs.size() << ' ' << tx.outputs.size() << '\n';
            for (std::size_t i = 0; i < tx.inputs.size(); ++i) {
                const Digest witness = i < tx.witnesses.size() ? tx.witnesses[i] : Digest{};
                out << "in " << tx.inputs[i].tx_id.hex() << ' ' << tx.inputs[i].index << ' ' << witness.hex()
                    << '\n';
            }
            for (const auto& o : tx.outputs)
                out << "out " << to_string(o.kind) << ' ' << o.address << ' ' << o.value.units() << '\n';
        }
    }
}

std::string dump_chain(const Chain& chain)
{
    std::ostringstream out;
    dump_chain(chain, out);
    return out.str();
}

namespace {

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    std::istringstream next(const std::string& expected_tag)
    {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (!line.empty())
                break;
        }
        if (line.empty())
            fail("unexpected end of input, wanted '" + expected_tag + "'");
        std::istringstream fields(line);
        std::string tag;
        fields >> tag;
        if (tag != expected_tag)
            fail("expected '" + expected_tag + "', got '" + tag + "'");
        return fields;
    }

    [[noreturn]] void fail(const std::string& what) const
    {
        throw Error(ErrorCode::malformed_chain, "line " + std::to_string(line_no_) + ": " + what);
    }

    template <typename T>
    T field(std::istringstream& fields, const char* name) const
    {
        T value{};
        if (!(fields >> value))
            fail(std::string("missing or bad field ") + name);
        return value;
    }

    Digest digest(std::istringstream& fields, const char* name) const
    {
        auto text = field<std::string>(fields, name);
        try {
            return Digest::from_hex(text);
        } catch (const std::invalid_argument&) {
            fail(std::string("bad digest in ") + name);
        }
    }

private:
    std::istream& in_;
    std::size_t line_no_ = 0;
};

} // namespace

Chain restore_chain(std::istream& in, const KeyRegistry* keys)
{
    LineReader reader(in);
    auto head = reader.next("teevil-chain");
    auto version = reader.field<std::string>(head, "version");
    if (version != "v1")
        reader.fail("unsupported version " + version);
    auto diff = reader.field<std::string>(head, "difficulty");
    auto count = reader.field<std::string>(head, "blocks");
    if (diff.rfind("difficulty=", 0) != 0 || count.rfind("blocks=", 0) != 0)
        reader.fail("bad header line");
    const unsigned bits = static_cast<unsigned>(std::stoul(diff.substr(11)));
    const std::size_t blocks = std::stoull(count.substr(7));
    if (blocks == 0)
        reader.fail("chain without genesis");

    std::optional<Chain> chain;
    for (std::size_t b = 0; b < blocks; ++b) {
        auto fields = reader.next("block");
        Block block;
        block.header.height = reader.field<std::uint64_t>(fields, "height");
        block.header.prev_digest = reader.digest(fields, "prev_digest");
        block.header.payload_digest = reader.digest(fields, "payload_digest");
        block.header.pow_nonce = reader.field<std::uint64_t>(fields, "pow_nonce");
        block.header.own_digest = reader.digest(fields, "own_digest");
        const auto tx_count = reader.field<std::size_t>(fields, "tx_count");
        for (std::size_t t = 0; t < tx_count; ++t) {
            auto txf = reader.next("tx");
            Transaction tx;
            const Digest claimed = reader.digest(txf, "tx_id");
            tx.memo = reader.field<std::string>(txf, "memo");
            if (tx.memo == "-")
                tx.memo.clear();
            const auto nin = reader.field<std::size_t>(txf, "input_count");
            const auto nout = reader.field<std::size_t>(txf, "output_count");
            for (std::size_t i = 0; i < nin; ++i) {
                auto inf = reader.next("in");
                NoteId id{reader.digest(inf, "note_tx_id"), reader.field<std::uint32_t>(inf, "note_index")};
                tx.inputs.push_back(id);
                tx.witnesses.push_back(reader.digest(inf, "witness"));
            }
            for (std::size_t i = 0; i < nout; ++i) {
                auto outf = reader.next("out");
                auto kind = output_kind_from_string(reader.field<std::string>(outf, "kind"));
                if (!kind)
                    reader.fail("unknown output kind");
                TxOutput o;
                o.kind = *kind;
                o.address = reader.field<std::string>(outf, "address");
                o.value = Amount::from_units(reader.field<std::int64_t>(outf, "value"));
                tx.outputs.push_back(std::move(o));
            }
            tx.tx_id = claimed;
            if (tx.compute_id() != claimed)
                reader.fail("tx_id does not match contents");
            block.txs.push_back(std::move(tx));
        }
        if (!chain)
            chain = Chain::from_genesis_block(std::move(block), bits);
        else
            chain = append_mined_block(*chain, std::move(block), keys);
    }
    return *chain;
}

Chain restore_chain(const std::string& text, const KeyRegistry* keys)
{
    std::istringstream in(text);
    return restore_chain(in, keys);
}

} // namespace teevil::ledger
