#pragma once

// Naive reference model of the RBAC contract used as a test oracle.
// Deliberately shares nothing with the implementation beyond the Address
// type: records live in a flat vector, lookups are linear scans, roles are
// plain strings and permissions raw bits.

#include <dosnrbac/crypto.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dosnrbac::testing {

class ReferenceRbac {
public:
    static constexpr std::uint8_t kDelegate = 4;

    explicit ReferenceRbac(Address owner, bool transfer_moves = false)
        : m_owner{owner}, m_moves{transfer_moves}
    {
    }

    bool add(const Address& caller, const std::vector<Address>& subjects, const std::string& role, std::uint8_t perm)
    {
        if (m_destroyed || caller != m_owner || subjects.empty()) return false;
        for (std::size_t i = 0; i < subjects.size(); ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                if (subjects[i] == subjects[j]) return false;
            }
            if (active(subjects[i], role)) return false;
        }
        for (const auto& s : subjects) put(s, role, perm);
        return true;
    }

    bool update(const Address& caller, const std::vector<Address>& subjects, const std::string& role, std::uint8_t perm)
    {
        if (m_destroyed || caller != m_owner || subjects.empty()) return false;
        const auto saved = m_records;
        for (const auto& s : subjects) {
            if (!update_one(s, role, perm)) {
                m_records = saved;
                return false;
            }
        }
        return true;
    }

    bool remove(const Address& caller, const Address& subject, const std::string& role)
    {
        if (m_destroyed || caller != m_owner) return false;
        Record* r = active(subject, role);
        if (!r) return false;
        r->active = false;
        return true;
    }

    bool transfer(const Address& caller, const Address& source, const std::string& role, const Address& target)
    {
        if (m_destroyed || caller != source) return false;
        Record* src = active(source, role);
        if (!src || (src->perm & kDelegate) == 0 || active(target, role)) return false;
        const std::uint8_t perm = src->perm;
        if (m_moves) src->active = false;
        put(target, role, perm);
        return true;
    }

    bool destroy(const Address& caller)
    {
        if (m_destroyed || caller != m_owner) return false;
        m_destroyed = true;
        return true;
    }

    //! Permission bits, or nullopt for a deny.
    std::optional<std::uint8_t> query(const Address& subject, const std::string& role) const
    {
        if (m_destroyed) return std::nullopt;
        for (const auto& r : m_records) {
            if (r.subject == subject && r.role == role && r.active && r.perm != 0) return r.perm;
        }
        return std::nullopt;
    }

    bool destroyed() const { return m_destroyed; }

private:
    struct Record {
        Address subject;
        std::string role;
        std::uint8_t perm;
        bool active;
    };

    Record* active(const Address& subject, const std::string& role)
    {
        for (auto& r : m_records) {
            if (r.subject == subject && r.role == role && r.active) return &r;
        }
        return nullptr;
    }

    void put(const Address& subject, const std::string& role, std::uint8_t perm)
    {
        for (auto& r : m_records) {
            if (r.subject == subject && r.role == role) {
                r = Record{subject, role, perm, true};
                return;
            }
        }
        m_records.push_back(Record{subject, role, perm, true});
    }

    bool update_one(const Address& subject, const std::string& role, std::uint8_t perm)
    {
        if (Record* r = active(subject, role)) {
            r->perm = perm;
            return true;
        }
        bool had_any = false;
        for (auto& r : m_records) {
            if (r.subject == subject && r.active) {
                r.active = false;
                had_any = true;
            }
        }
        if (!had_any) return false;
        put(subject, role, perm);
        return true;
    }

    Address m_owner;
    bool m_moves;
    bool m_destroyed{false};
    std::vector<Record> m_records;
};

} // namespace dosnrbac::testing
