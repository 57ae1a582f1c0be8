// scamdetect: static detection of malicious smart contracts
// Copyright 2026 The scamdetect Authors.
// SPDX-License-Identifier: Apache-2.0

#include "scamdetect/interp.hpp"
#include "scamdetect/error.hpp"
#include "scamdetect/rng.hpp"

#include <map>

namespace scamdetect
{
namespace
{
const word kSignBit = word{1} << 255;

bool is_negative(const word& w)
{
    return (w & kSignBit) != 0;
}

// Signed less-than on two's-complement words.
bool slt(const word& a, const word& b)
{
    const bool na = is_negative(a), nb = is_negative(b);
    if (na != nb)
        return na;
    return a < b;
}

struct MemoryFault
{};

class Machine
{
public:
    Machine(bytes_view code, bytes_view calldata) : code_{code}, calldata_{calldata}
    {
        jumpdest_.assign(code.size(), false);
        for (std::size_t pc = 0; pc < code.size();)
        {
            if (code[pc] == op::JUMPDEST)
                jumpdest_[pc] = true;
            pc += 1 + opcode_info(code[pc]).immediate_len;
        }
    }

    ExecutionResult run(std::size_t step_limit)
    {
        ExecutionResult res;
        std::size_t steps = 0;
        std::size_t pc = 0;
        try
        {
            while (true)
            {
                if (pc >= code_.size())
                    return finish(ExecStatus::Stopped);
                if (steps == step_limit)
                    return {ExecStatus::OutOfSteps, {}, {}};
                ++steps;

                const std::uint8_t opc = code_[pc];
                if (opc >= op::PUSH0 && opc <= op::PUSH32)
                {
                    const std::size_t n = opc - op::PUSH0;
                    word v = 0;
                    for (std::size_t i = 0; i < n; ++i)
                    {
                        const std::size_t at = pc + 1 + i;
                        v = (v << 8) | (at < code_.size() ? code_[at] : 0);
                    }
                    stack_.push_back(v);
                    pc += 1 + n;
                    continue;
                }
                if (opc >= op::DUP1 && opc <= op::DUP16)
                {
                    const std::size_t n = opc - op::DUP1 + 1u;
                    need(n, pc);
                    stack_.push_back(stack_[stack_.size() - n]);
                    ++pc;
                    continue;
                }
                if (opc >= op::SWAP1 && opc <= op::SWAP16)
                {
                    const std::size_t n = opc - op::SWAP1 + 1u;
                    need(n + 1, pc);
                    std::swap(stack_.back(), stack_[stack_.size() - 1 - n]);
                    ++pc;
                    continue;
                }

                switch (opc)
                {
                case op::STOP:
                    return finish(ExecStatus::Stopped);
                case 0x01:
                    binary(pc, [](const word& a, const word& b) { return a + b; });
                    break;
                case 0x02:
                    binary(pc, [](const word& a, const word& b) { return a * b; });
                    break;
                case 0x03:
                    binary(pc, [](const word& a, const word& b) { return a - b; });
                    break;
                case 0x04:
                    binary(pc, [](const word& a, const word& b) { return b == 0 ? word{0} : a / b; });
                    break;
                case 0x06:
                    binary(pc, [](const word& a, const word& b) { return b == 0 ? word{0} : a % b; });
                    break;
                case 0x10:
                    binary(pc, [](const word& a, const word& b) { return word{a < b ? 1 : 0}; });
                    break;
                case 0x11:
                    binary(pc, [](const word& a, const word& b) { return word{a > b ? 1 : 0}; });
                    break;
                case 0x12:
                    binary(pc, [](const word& a, const word& b) { return word{slt(a, b) ? 1 : 0}; });
                    break;
                case 0x13:
                    binary(pc, [](const word& a, const word& b) { return word{slt(b, a) ? 1 : 0}; });
                    break;
                case 0x14:
                    binary(pc, [](const word& a, const word& b) { return word{a == b ? 1 : 0}; });
                    break;
                case 0x15:
                    need(1, pc);
                    stack_.back() = stack_.back() == 0 ? 1 : 0;
                    break;
                case 0x16:
                    binary(pc, [](const word& a, const word& b) { return a & b; });
                    break;
                case 0x17:
                    binary(pc, [](const word& a, const word& b) { return a | b; });
                    break;
                case 0x18:
                    binary(pc, [](const word& a, const word& b) { return a ^ b; });
                    break;
                case 0x19:
                    need(1, pc);
                    stack_.back() = ~stack_.back();
                    break;
                case 0x1a:
                    binary(pc, [](const word& i, const word& x) {
                        if (i >= 32)
                            return word{0};
                        const unsigned shift = 8 * (31 - static_cast<unsigned>(i));
                        return (x >> shift) & 0xff;
                    });
                    break;
                case 0x1b:
                    binary(pc, [](const word& s, const word& x) {
                        return s >= 256 ? word{0} : word{x << static_cast<unsigned>(s)};
                    });
                    break;
                case 0x1c:
                    binary(pc, [](const word& s, const word& x) {
                        return s >= 256 ? word{0} : word{x >> static_cast<unsigned>(s)};
                    });
                    break;
                case 0x1d:
                    binary(pc, [](const word& s, const word& x) {
                        const bool neg = is_negative(x);
                        if (s >= 256)
                            return neg ? ~word{0} : word{0};
                        const unsigned n = static_cast<unsigned>(s);
                        word r = x >> n;
                        if (neg && n > 0)
                            r |= ~word{0} << (256 - n);
                        return r;
                    });
                    break;
                case op::CALLDATALOAD: {
                    need(1, pc);
                    word v = 0;
                    const word off = stack_.back();
                    for (std::size_t i = 0; i < 32; ++i)
                    {
                        std::uint8_t b = 0;
                        if (off < calldata_.size() && static_cast<std::size_t>(off) + i < calldata_.size())
                            b = calldata_[static_cast<std::size_t>(off) + i];
                        v = (v << 8) | b;
                    }
                    stack_.back() = v;
                    break;
                }
                case op::CALLDATASIZE:
                    stack_.push_back(calldata_.size());
                    break;
                case op::POP:
                    need(1, pc);
                    stack_.pop_back();
                    break;
                case op::MLOAD: {
                    need(1, pc);
                    const std::size_t off = mem_range(stack_.back(), 32);
                    word v = 0;
                    for (std::size_t i = 0; i < 32; ++i)
                        v = (v << 8) | memory_[off + i];
                    stack_.back() = v;
                    break;
                }
                case op::MSTORE: {
                    need(2, pc);
                    const word off_w = pop();
                    word v = pop();
                    const std::size_t off = mem_range(off_w, 32);
                    for (std::size_t i = 32; i-- > 0;)
                    {
                        memory_[off + i] = static_cast<std::uint8_t>(v & 0xff);
                        v >>= 8;
                    }
                    break;
                }
                case op::MSTORE8: {
                    need(2, pc);
                    const word off_w = pop();
                    const word v = pop();
                    memory_[mem_range(off_w, 1)] = static_cast<std::uint8_t>(v & 0xff);
                    break;
                }
                case op::SLOAD: {
                    need(1, pc);
                    auto it = storage_.find(stack_.back());
                    stack_.back() = it == storage_.end() ? word{0} : it->second;
                    break;
                }
                case op::SSTORE: {
                    need(2, pc);
                    const word key = pop();
                    storage_[key] = pop();
                    break;
                }
                case op::JUMP: {
                    need(1, pc);
                    const word target = pop();
                    if (!valid_jump(target))
                        return finish(ExecStatus::Reverted);
                    pc = static_cast<std::size_t>(target);
                    continue;
                }
                case op::JUMPI: {
                    need(2, pc);
                    const word target = pop();
                    const word cond = pop();
                    if (cond != 0)
                    {
                        if (!valid_jump(target))
                            return finish(ExecStatus::Reverted);
                        pc = static_cast<std::size_t>(target);
                        continue;
                    }
                    break;
                }
                case op::PC:
                    stack_.push_back(pc);
                    break;
                case op::JUMPDEST:
                    break;
                case op::RETURN:
                case op::REVERT: {
                    need(2, pc);
                    const word off_w = pop();
                    const word size_w = pop();
                    ExecutionResult r =
                        finish(opc == op::RETURN ? ExecStatus::Returned : ExecStatus::Reverted);
                    if (size_w != 0)
                    {
                        if (size_w > kMemoryLimit)
                            throw MemoryFault{};
                        const auto size = static_cast<std::size_t>(size_w);
                        const std::size_t off = mem_range(off_w, size);
                        r.return_data.assign(memory_.begin() + static_cast<std::ptrdiff_t>(off),
                            memory_.begin() + static_cast<std::ptrdiff_t>(off + size));
                    }
                    r.final_stack = stack_;
                    return r;
                }
                default:
                    throw Error{ErrorCode::UnsupportedOp,
                        "unsupported opcode " + std::string{opcode_info(opc).mnemonic} + " (0x" +
                            to_hex(bytes{opc}) + ") at offset " + std::to_string(pc)};
                }
                ++pc;
            }
        }
        catch (const MemoryFault&)
        {
            return {ExecStatus::Reverted, {}, stack_};
        }
        return res;
    }

private:
    ExecutionResult finish(ExecStatus status) const { return {status, {}, stack_}; }

    void need(std::size_t n, std::size_t pc) const
    {
        if (stack_.size() < n)
            throw Error{ErrorCode::StackUnderflow,
                "stack underflow at offset " + std::to_string(pc) + " (" +
                    std::string{opcode_info(code_[pc]).mnemonic} + ")"};
    }

    word pop()
    {
        word v = stack_.back();
        stack_.pop_back();
        return v;
    }

    template <typename F>
    void binary(std::size_t pc, F f)
    {
        need(2, pc);
        const word a = pop();
        stack_.back() = f(a, stack_.back());
    }

    bool valid_jump(const word& target) const
    {
        return target < code_.size() && jumpdest_[static_cast<std::size_t>(target)];
    }

    /// Grow memory to cover [off, off + len) and return off.
    std::size_t mem_range(const word& off_w, std::size_t len)
    {
        if (off_w > kMemoryLimit)
            throw MemoryFault{};
        const auto off = static_cast<std::size_t>(off_w);
        if (off + len > kMemoryLimit)
            throw MemoryFault{};
        const std::size_t end = (off + len + 31) / 32 * 32;
        if (memory_.size() < end)
            memory_.resize(end, 0);
        return off;
    }

    bytes_view code_;
    bytes_view calldata_;
    std::vector<bool> jumpdest_;
    std::vector<word> stack_;
    bytes memory_;
    std::map<word, word> storage_;
};
}  // namespace

std::string_view exec_status_name(ExecStatus s) noexcept
{
    switch (s)
    {
    case ExecStatus::Stopped:
        return "stopped";
    case ExecStatus::Returned:
        return "returned";
    case ExecStatus::Reverted:
        return "reverted";
    case ExecStatus::OutOfSteps:
        return "out_of_steps";
    }
    return "stopped";
}

std::string_view verdict_name(Verdict v) noexcept
{
    switch (v)
    {
    case Verdict::Equivalent:
        return "equivalent";
    case Verdict::NotEquivalent:
        return "not_equivalent";
    case Verdict::Unsupported:
        return "unsupported";
    }
    return "unsupported";
}

ExecutionResult interp_execute(bytes_view code, bytes_view calldata, std::size_t step_limit)
{
    if (step_limit == 0)
        throw Error{ErrorCode::InvalidArgument, "step_limit must be >= 1"};
    return Machine{code, calldata}.run(step_limit);
}

EquivalenceReport check_equivalence(
    bytes_view a, bytes_view b, std::size_t num_vectors, std::uint64_t seed)
{
    EquivalenceReport report;
    Rng rng = Rng::derive(seed, 0xca11da7a);
    for (std::size_t i = 0; i < num_vectors; ++i)
    {
        bytes calldata(rng.below(65));
        for (auto& x : calldata)
            x = rng.byte();
        ++report.vectors;
        try
        {
            if (interp_execute(a, calldata) != interp_execute(b, calldata))
            {
                report.verdict = Verdict::NotEquivalent;
                return report;
            }
        }
        catch (const Error& e)
        {
            if (e.code() != ErrorCode::UnsupportedOp)
                throw;
            report.verdict = Verdict::Unsupported;
            report.unsupported_op = e.what();
            return report;
        }
    }
    return report;
}

}  // namespace scamdetect
