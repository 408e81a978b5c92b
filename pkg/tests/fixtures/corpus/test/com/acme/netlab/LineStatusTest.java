package com.acme.netlab.tests;

import com.acme.netlab.model.LineState;
import com.acme.netlab.util.Asserts;
import com.acme.netlab.util.Log;
import static com.acme.netlab.core.TestSteps.*;

public class LineStatusTest {

    public void lineUp() {
        TestBegin("Verify line status up");
        Asserts.check("usable", LineState.UP.isUsable());
        TestEnd();
    }

    public void lineDown() {
        TestBegin("Verify line status down");
        Asserts.check("unusable", !LineState.DOWN.isUsable());
        TestEnd();
    }

    public void lineDegraded() {
        TestBegin("Verify line status degraded");
        if (LineState.DEGRADED.isUsable()) {
            Log.info("degraded but usable");
        } else {
            Asserts.fail("degraded line unusable");
        }
        TestEnd();
    }

    public void lineReport() {
        TestBegin("Verify line status report");
        for (int i = 0; i < 2; i++) {
            Log.info("line checked");
        }
        TestEnd();
    }
}
