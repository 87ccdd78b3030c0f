// Object heap. Addresses grow monotonically and are never reused, so undoing
// an allocation is a plain erase and addresses stay stable identifiers for
// the lifetime of a run.

#pragma once

#include <map>
#include <stdexcept>

#include "minimuli/value.hpp"

namespace minimuli {

struct HeapObject {
    TypeId concreteType = kNoType;  // kNoType while the object's type is unresolved
    TypeId declaredType = kNoType;  // static type the object was created with
    bool createdFree = false;
    // Concrete objects hold every field slot; unresolved objects hold only the
    // slots that have been touched so far.
    std::map<FieldRef, Value> fields;

    bool isUnresolved() const { return concreteType == kNoType; }
};

class Heap {
public:
    HeapAddr alloc() { return next_++; }

    HeapObject& at(HeapAddr a) {
        auto it = objects_.find(a);
        if (it == objects_.end()) throw std::logic_error("heap: dangling address");
        return it->second;
    }
    const HeapObject& at(HeapAddr a) const {
        auto it = objects_.find(a);
        if (it == objects_.end()) throw std::logic_error("heap: dangling address");
        return it->second;
    }

    bool contains(HeapAddr a) const { return objects_.count(a) != 0; }
    void put(HeapAddr a, HeapObject obj) { objects_[a] = std::move(obj); }
    void erase(HeapAddr a) { objects_.erase(a); }

    const std::map<HeapAddr, HeapObject>& objects() const { return objects_; }

private:
    std::map<HeapAddr, HeapObject> objects_;
    HeapAddr next_ = 0;
};

}  // namespace minimuli
