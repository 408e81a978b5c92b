package com.acme.netlab.tests;

import com.acme.netlab.core.Channel;
import com.acme.netlab.util.Text;
import static com.acme.netlab.core.TestSteps.*;

public class ChannelAmbiguityTest {

    public void joinAndClose() {
        TestBegin("Join labels then close resources");
        String label = Text.join("a", "b");
        close();
        TestEnd();
    }

    public void sendJoined() {
        TestBegin("Send joined label on channel");
        Channel channel = new Channel();
        channel.send(Text.join("x", "y"));
        channel.close();
        TestEnd();
    }
}
