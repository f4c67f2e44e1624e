#pragma once

#include "amrt/model.hpp"

#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

namespace amrt {

// Primitive reversible edits. Remove ops capture the full removed content
// so the inverse is total.
struct AddNodeOp {
    std::string id;
    Node node;
};
struct RemoveNodeOp {
    std::string id;
    Node captured;
};
struct SetAttrOp {
    std::string id;
    std::string attr;
    Scalar old_value;
    Scalar new_value;
};
struct AddEdgeOp {
    std::string id;
    Edge edge;
};
struct RemoveEdgeOp {
    std::string id;
    Edge captured;
};

using EditOp = std::variant<AddNodeOp, RemoveNodeOp, SetAttrOp, AddEdgeOp, RemoveEdgeOp>;

EditOp inverse(const EditOp& op);
std::string edit_op_name(const EditOp& op);
const std::string& edit_op_target(const EditOp& op);

// Applies one op to the model; throws ModelError(StaleOp/TypeViolation/...)
// when the op does not fit the current state.
void apply_edit_op(ReflectionModel& model, const EditOp& op);

enum class TxnStatus { Open, Committed, RolledBack };

// Single open transaction per model; rollback replays inverses in strict
// reverse order. rollback_to() gives the savepoint semantics the planner
// needs for do/undo exploration.
class Transaction {
public:
    Transaction(std::int64_t id, ReflectionModel& model) : id_(id), model_(&model) {
        if (model.write_locked_)
            throw ModelError(ErrorCode::AlreadyOpen, "model already has an open transaction");
        model.write_locked_ = true;
    }

    std::int64_t id() const { return id_; }
    TxnStatus status() const { return status_; }
    const std::vector<EditOp>& ops() const { return ops_; }

    // Applies `op` and appends it; returns the op paired with its inverse.
    std::pair<EditOp, EditOp> apply(const EditOp& op);

    std::size_t mark() const { return ops_.size(); }
    void rollback_to(std::size_t mark);

    std::vector<EditOp> commit();
    void rollback();

private:
    void require_open() const;

    std::int64_t id_;
    ReflectionModel* model_;
    std::vector<EditOp> ops_;
    TxnStatus status_ = TxnStatus::Open;
    friend class TransactionManager;
};

// Hands out transactions with monotone ids and enforces the single-writer
// rule per model.
class TransactionManager {
public:
    explicit TransactionManager(ReflectionModel& model) : model_(&model) {}
    ~TransactionManager() {
        if (has_open()) current_->rollback();
    }

    Transaction& begin();
    bool has_open() const { return current_ && current_->status() == TxnStatus::Open; }
    Transaction* current() { return current_.get(); }

private:
    ReflectionModel* model_;
    std::unique_ptr<Transaction> current_;
    std::int64_t next_id_ = 1;
};

} // namespace amrt
